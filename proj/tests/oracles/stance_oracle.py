"""Independent NumPy reference for the stance model unit tests.

Parameters use fill(k, p) = 0.5 * sin(0.7 * k + 0.3 * p) as in
encoder_oracle.py; p counts parameters in model order: topic encoder (6),
text encoder (6), query layer (2, BiC+E only), output layer (2).
Run: python3 tests/oracles/stance_oracle.py
"""
import numpy as np

H, dw, de = 2, 3, 2
W = np.array([[0.3, -0.2, 0.1, 0.5],
              [0.0, 0.4, -0.3, 0.2],
              [-0.1, 0.2, 0.6, -0.4]])  # word vectors, dw x 4
A = np.array([[0.5, -0.3, 0.2],
              [0.1, 0.4, -0.6]])  # attention vectors, de x 3


def fill(shape, p):
    n = shape[0] * shape[1]
    return (0.5 * np.sin(0.7 * np.arange(n) + 0.3 * p)).reshape(shape, order="F")


def sig(x):
    return 1 / (1 + np.exp(-x))


def lstm(seq, w_in, w_rec, b, reverse, c0):
    h = np.zeros(H)
    c = c0.copy()
    cols = range(seq.shape[1] - 1, -1, -1) if reverse else range(seq.shape[1])
    for t in cols:
        z = w_in @ seq[:, t] + w_rec @ h + b[:, 0]
        i, f, g, o = sig(z[:H]), sig(z[H:2 * H]), np.tanh(z[2 * H:3 * H]), sig(z[3 * H:])
        c = f * c + i * g
        h = o * np.tanh(c)
    return h, c


def bilstm(seq, p0, cells=None):
    ps = [fill((4 * H, dw), p0), fill((4 * H, H), p0 + 1), fill((4 * H, 1), p0 + 2),
          fill((4 * H, dw), p0 + 3), fill((4 * H, H), p0 + 4), fill((4 * H, 1), p0 + 5)]
    c_f = np.zeros(H) if cells is None else cells[:H]
    c_b = np.zeros(H) if cells is None else cells[H:]
    hf, cf = lstm(seq, *ps[:3], False, c_f)
    hb, cb = lstm(seq, *ps[3:], True, c_b)
    return np.concatenate([hf, hb]), np.concatenate([cf, cb])


np.set_printoptions(precision=17)
topic = W[:, [0]]       # one topic token
text = W[:, [1, 3]]     # two text tokens
h_p, c_p = bilstm(topic, 0)
h_t, _ = bilstm(text, 6, c_p)

out_w, out_b = fill((3, 2 * H), 12), fill((3, 1), 13)
print("bic logits", repr(out_w @ h_t + out_b[:, 0]))

q_w, q_b = fill((de, 2 * H), 12), fill((de, 1), 13)
q = q_w @ h_p + q_b[:, 0]
K = A[:, [0, 2]].T
s = K @ q / np.sqrt(de)
w = np.exp(s - s.max())
w /= w.sum()
a = K.T @ w
out_w, out_b = fill((3, 2 * H + de), 14), fill((3, 1), 15)
print("bic+e logits", repr(out_w @ np.concatenate([h_t, a]) + out_b[:, 0]))
