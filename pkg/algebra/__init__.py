# Exact algebra for the global Amice duality: coefficient rings, weights,
# truncated series, Hopf structures, finite differences and distributions.
