"""Independent NumPy reference for the encoder unit tests.

Parameters are filled by fill(k, p) = 0.5 * sin(0.7 * k + 0.3 * p), where k is
the column-major element index and p the parameter's position in the model's
parameter list. Run: python3 tests/oracles/encoder_oracle.py
"""
import numpy as np

d, H = 4, 2
E = np.array([[0.2, -0.1, 0.4, 0.3, -0.5, 0.1],
              [0.0, 0.3, -0.2, 0.1, 0.2, -0.4],
              [-0.3, 0.5, 0.1, -0.2, 0.0, 0.3],
              [0.4, 0.1, 0.0, 0.5, -0.1, 0.2]])  # d x vocab


def fill(shape, p):
    n = shape[0] * shape[1]
    v = 0.5 * np.sin(0.7 * np.arange(n) + 0.3 * p)
    return v.reshape(shape, order="F")


def sig(x):
    return 1 / (1 + np.exp(-x))


def lstm(seq, w_in, w_rec, b, reverse):
    h = np.zeros(H)
    c = np.zeros(H)
    cols = range(seq.shape[1] - 1, -1, -1) if reverse else range(seq.shape[1])
    for t in cols:
        z = w_in @ seq[:, t] + w_rec @ h + b[:, 0]
        i, f, g, o = sig(z[:H]), sig(z[H:2 * H]), np.tanh(z[2 * H:3 * H]), sig(z[3 * H:])
        c = f * c + i * g
        h = o * np.tanh(c)
    return h


def encoder(p0):
    # parameter order: fwd.w_in, fwd.w_rec, fwd.bias, bwd.w_in, bwd.w_rec, bwd.bias
    return [fill((4 * H, d), p0), fill((4 * H, H), p0 + 1), fill((4 * H, 1), p0 + 2),
            fill((4 * H, d), p0 + 3), fill((4 * H, H), p0 + 4), fill((4 * H, 1), p0 + 5)]


def encode(tokens, related, enc, attend):
    seq = E[:, tokens]
    h = np.concatenate([lstm(seq, *enc[:3], False), lstm(seq, *enc[3:], True)])
    s = h.copy()
    if attend and related:
        R = E[:, related].T
        sc = R @ h / np.sqrt(d)
        w = np.exp(sc - sc.max())
        w /= w.sum()
        s = s + R.T @ w
    return s / np.linalg.norm(s)


def xent(logits, target, weights):
    m = logits.max()
    lse = np.log(np.exp(logits - m).sum()) + m
    return weights[target] * (lse - logits[target])


def bce(logits, bits):
    return sum(max(z, 0) - z * y + np.log1p(np.exp(-abs(z))) for z, y in zip(logits, bits))


np.set_printoptions(precision=17)
enc = encoder(0)
# Joint model over aspects [SocialValue, Emotion, P(wt)]: heads follow the
# encoder parameters (indices 6..11).
head = {"SocialValue": (fill((3, 2 * H + d), 6), fill((3, 1), 7)),
        "Emotion": (fill((8, 2 * H + d), 8), fill((8, 1), 9)),
        "P(wt)": (fill((3, 2 * H + d), 10), fill((3, 1), 11))}

v_ce = encode([0, 1, 2], [3, 4], enc, False)
v_cer = encode([0, 1, 2], [3, 4], enc, True)
print("v_ce", repr(v_ce))
print("v_cer", repr(v_cer))

e = E[:, 5]
x = np.concatenate([v_cer, e])
W, b = head["SocialValue"]
logits = W @ x + b[:, 0]
print("social logits", repr(logits), "argmax", int(np.argmax(logits)))
W, b = head["Emotion"]
emo = W @ x + b[:, 0]
print("emotion flags", [int(sig(z) >= 0.5) for z in emo])

# Two-example mixed-POS batch under CE+R joint, lambda: Social 0.3, Emotion 3.0, P(wt) 1.0
# example 1: noun, tokens [0,1,2], related [3,4], self 5, Social class 2, emotions {joy, fear}
# example 2: verb, tokens [4,2], related [], no self, P(wt) class 0
cw_social = np.array([1.0, 1.0, 1.0])
cw_pwt = np.array([1.0, 1.0, 1.0])
W, b = head["SocialValue"]
l1 = 0.3 * xent(W @ x + b[:, 0], 2, cw_social)
W, b = head["Emotion"]
bits = [0, 1, 1, 0, 0, 0, 0, 0]
l1 += 3.0 * bce(W @ x + b[:, 0], bits)
v2 = encode([4, 2], [], enc, True)
x2 = np.concatenate([v2, np.zeros(d)])
W, b = head["P(wt)"]
l2 = 1.0 * xent(W @ x2 + b[:, 0], 0, cw_pwt)
print("batch loss", repr(l1 + l2))
