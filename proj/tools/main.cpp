#include "conn/cli/cli.hpp"

int main(int argc, char** argv) { return conn::cli::run(argc, argv); }
