# coding: utf-8

# # Schmidt-class fidelity benchmarks
#
# For a Gaussian ensemble of coherent inputs with inverse width `lam`, and a
# target amplification `|a> -> |sqrt(eta) a>`, every process of Schmidt class
# `k` has average fidelity at most `U_k(eta, lam)`. Here we tabulate those
# curves on the usual grid.

# In[1]:

import numpy as np

from cvschmidt import GainWidthParams, classical_limit, quantum_limit, schmidt_bound
from cvschmidt.certify import rows_to_csv, sweep_table


# The `k = 1` value is the classical (measure-and-prepare) limit, and the
# sequence rises towards the quantum limit `min(1, (1+lam)/eta)`.

# In[2]:

lam = 0.01
etas = [0.5, 0.75, 1.0, 1.5, 2.0]
for eta in etas:
    p = GainWidthParams(eta, lam)
    us = np.array([schmidt_bound(k, p).value for k in range(1, 11)])
    print(f"eta={eta:<5} classical={classical_limit(p):.6f} quantum={quantum_limit(p):.6f}")
    print("   U_k:", np.array2string(us, precision=6, max_line_width=120))


# The optimizer also reports which principal submatrix won. On this grid it is
# always the leading `k x k` window of the `J = 0` block.

# In[3]:

res = schmidt_bound(6, GainWidthParams(1.0, lam))
print(res.best_J, res.best_tuple, res.relevant_J, res.candidates_examined, res.eigen_evaluations)


# The same numbers as CSV, ready for plotting elsewhere.

# In[4]:

print(rows_to_csv(sweep_table([1.0], lam, range(1, 6))))
