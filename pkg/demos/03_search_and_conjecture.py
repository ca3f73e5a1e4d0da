# coding: utf-8

# # Inside the search
#
# `U_k` is a maximum of Perron roots over all `k x k` principal submatrices
# of infinitely many blocks `A^(J)`. Monotonicity of the kernel entries cuts
# this down to a small candidate list per block, and a trace bound discards
# blocks and subtrees that cannot beat the leading window.

# In[1]:

import numpy as np

from cvschmidt import GainWidthParams, kernel_from_gain_width
from cvschmidt.enumeration import brute_force_maximize, generate_candidates, maximize
from cvschmidt.gamma_kernel import t_threshold


# Thresholds past which the `l`-th off-diagonal decreases along the diagonal.

# In[2]:

print(np.array([[t_threshold(l, J) for J in range(5)] for l in range(11)]))


# Candidate tuples for `k = 4` and `k = 5` in the `J = 0` block.

# In[3]:

print(list(generate_candidates(4, 0)))
print(list(generate_candidates(5, 0)))


# The pruned search against a brute-force scan of every tuple in a box.

# In[4]:

kp = kernel_from_gain_width(GainWidthParams(0.75, 0.01))
for k in range(1, 5):
    res = maximize(k, kp)
    print(k, res.raw_value, brute_force_maximize(k, kp)[0], res.best_J, res.best_tuple)


# Across the usual grid the winner is the leading window, i.e. the
# conjectured bound is the true bound there.

# In[5]:

gaps = []
for eta in (0.5, 0.75, 1.0, 1.5, 2.0):
    kp = kernel_from_gain_width(GainWidthParams(eta, 0.01))
    gaps += [maximize(k, kp).raw_value - maximize(k, kp).conjectured_raw for k in range(1, 11)]
print("max gap:", max(gaps))
