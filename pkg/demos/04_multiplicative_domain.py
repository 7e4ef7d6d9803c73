"""Three routes to the multiplicative domain of a unital channel.

For a unital channel M(Phi) is the commutant of the Kraus products
{V_i^* V_j} and also the fixed points of Phi^dag Phi; the package also
solves the intertwining equations directly.  All three agree.  Adding
dim ker(Phi) gives at most n^2, with equality for the diagonal
conditional expectation.
"""
import numpy as np

from qcomplement import codes
from qcomplement.gallery import diagonal_expectation
from qcomplement.sampling import random_unital_channel

rng = np.random.default_rng(1)
for phi in (random_unital_channel(rng, 4, 2), diagonal_expectation(4)):
    routes = codes.multiplicative_domain_routes(phi)
    base = routes["nullspace"]
    print(f"{phi.label}: dim M(Phi) = {base.dim}")
    for name, S in routes.items():
        if name != "nullspace":
            print(f"  {name:<16} projector distance {base.distance(S):.1e}")
    r = codes.unital_extras(phi)
    print(f"  dim M + dim ker = {r['dim_mult_domain']} + {r['dim_kernel']} = {r['dim_sum']}"
          f" <= {r['n_squared']}, saturated: {r['saturated']}")
