"""
Verification app: independent certificates for every sparsifier guarantee
and the quality reports they produce.
"""
