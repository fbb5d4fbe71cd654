"""The two hypothesis tests, from scratch: Shapiro-Wilk and the t-test.

Shows p-values on normal vs uniform samples, the location/scale
invariance of the normality test, and the t-test's tail behavior.
"""

import numpy as np

from asws import shapiro_wilk, student_t_tail, t_test_one_sample

rng = np.random.default_rng(7)

normal_sample = rng.normal(0.5, 0.1, 19)
uniform_sample = rng.uniform(0, 1, 50)

w, p = shapiro_wilk(normal_sample)
print(f"normal sample (n=19):   W={w:.4f}  p={p:.4f}  (large p: looks normal)")
w, p = shapiro_wilk(uniform_sample)
print(f"uniform sample (n=50):  W={w:.4f}  p={p:.4f}  (small p: rejected)")

scaled = 1000.0 * normal_sample - 37.0
w2, p2 = shapiro_wilk(scaled)
print(f"affine-transformed:     W={w2:.4f}  p={p2:.4f}  (unchanged by design)")

print()
drifting = rng.normal(0.002, 0.001, 19)   # per-epoch gains, mean clearly > 0
stalled = rng.normal(0.0, 0.001, 19)      # pure noise around zero
for name, sample in (("drifting deltas", drifting), ("stalled deltas", stalled)):
    t, p = t_test_one_sample(sample, 0.0)
    print(f"{name}: t={t:+.2f}  p={p:.4f}")

print()
print("Student-t two-sided tails, df=18:")
for t in (0.0, 0.5, 1.0, 2.1, 4.0):
    print(f"  |t| >= {t:3.1f}: {student_t_tail(t, 18):.4f}")

# how often does a true-null normal sample clear the 0.97 bar the stopping
# rule's accept-the-null reading would demand? (rarely; that is why votes
# compare p against 1 - alpha instead)
trials = 2000
hits = sum(shapiro_wilk(rng.normal(size=19)).p_value > 0.97 for _ in range(trials))
print(f"\nnull normal samples with shapiro p > 0.97: {hits}/{trials}")
hits = sum(shapiro_wilk(rng.normal(size=19)).p_value > 0.03 for _ in range(trials))
print(f"null normal samples with shapiro p > 0.03: {hits}/{trials}")
