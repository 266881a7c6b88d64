#!/usr/bin/env python3
"""Walk through tensor-train compression of a weight matrix.

Shows how a dimension is factorized into photonic-core-sized modes, how
the TT-SVD trades rank for reconstruction error, and what that does to
the parameter count.
"""

import numpy as np

from tomfn import tt

rng = np.random.default_rng(0)

print("=== dimension factorization (core-size cap 8) ===")
for n in (32, 80, 300, 150, 64):
    print(f"  {n:>4} -> {tt.factorize_dim(n)}")

# A dimension with a large prime factor has to be zero-padded first.
print(f"  33 is not mappable; next mappable dimension: {tt.next_mappable_dim(33)}")

print()
print("=== TT-SVD of a 32x32 matrix, modes [4,8] x [4,8] ===")
w = rng.normal(size=(32, 32))
rows, cols = tt.factorize_dim(32), tt.factorize_dim(32)
print(f"{'max_rank':>8} {'ranks':>12} {'params':>7} {'rel error':>10}")
for max_rank in (1, 2, 4, 8, 16, 32):
    t = tt.tt_from_dense(w, rows, cols, max_rank=max_rank, tol=0.0)
    err = np.linalg.norm(tt.tt_to_dense(t) - w) / np.linalg.norm(w)
    print(f"{max_rank:>8} {str(t.ranks):>12} {tt.tt_param_count(t):>7} {err:>10.2e}")
print(f"dense parameter count: {32 * 32}")

print()
print("=== matvec without materializing the matrix ===")
t = tt.tt_from_dense(w, rows, cols, max_rank=32, tol=0.0)
x = rng.normal(size=32)
direct = w @ x
via_tt = tt.tt_matvec(t, x)
print(f"max |tt_matvec - dense matvec| = {np.max(np.abs(via_tt - direct)):.2e}")

# The structure TT exploits is Kronecker-like, not plain low matrix rank:
# a Kronecker product splits into bond rank 1 exactly.
print()
print("=== Kronecker structure compresses losslessly at bond rank 1 ===")
kron = np.kron(rng.normal(size=(4, 4)), rng.normal(size=(8, 8)))
t_kron = tt.tt_from_dense(kron, rows, cols, max_rank=32, tol=1e-12)
err = np.linalg.norm(tt.tt_to_dense(t_kron) - kron) / np.linalg.norm(kron)
print(f"kron(4x4, 8x8): TT ranks {t_kron.ranks}, params {tt.tt_param_count(t_kron)} "
      f"(dense: {32 * 32}), rel error {err:.2e}")
