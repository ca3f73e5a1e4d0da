# coding: utf-8

# # A filter that reaches the conjectured bound
#
# The diagonal filter `Q_k = sqrt(N) sum_n a_n g^n |n><n|` with
# `g = sqrt(1 + lam)` and `a` the Perron vector of the leading window has
# post-selected fidelity equal to the conjectured bound. We check this
# against a numerical integration over the Gaussian prior that only uses
# Fock amplitudes of coherent states.

# In[1]:

import numpy as np

from cvschmidt import GainWidthParams, conjectured_bound, kernel_from_gain_width
from cvschmidt.channels_oracle import FilterAction, FilterSpec, filter_fidelity_closed, quadrature_fidelity_oracle
from cvschmidt.gamma_kernel import SubmatrixSpec, build_submatrix


# In[2]:

eta, lam = 1.0, 0.1
p = GainWidthParams(eta, lam)
kp = kernel_from_gain_width(p)
for k in range(1, 7):
    w, v = np.linalg.eigh(build_submatrix(SubmatrixSpec(0, tuple(range(k))), kp))
    f = FilterSpec.bound_attaining(np.abs(v[:, -1]), lam)
    closed, ps = filter_fidelity_closed(f, p)
    _, ps_q, quad = quadrature_fidelity_oracle(FilterAction(f, eta), p)
    print(f"k={k}: closed={closed:.12f} quadrature={quad:.12f} bound={conjectured_bound(k, p):.12f} P_s={ps:.3e}")


# Here the success probability grows with `k`: the Perron weight spreads
# over more levels, so the largest `a_n^2 g^(2n)` shrinks and `N` can grow.
# It stays positive for every finite `k`.
