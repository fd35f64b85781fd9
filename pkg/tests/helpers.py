"""Random generators shared by the test modules."""

from cmzg.sampling import random_block_sum, random_conjugate, random_poly, random_unimodular  # noqa: F401
