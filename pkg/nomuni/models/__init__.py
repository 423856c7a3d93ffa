"""
Term models: nominal terms in `nominal`, simply-typed λ-terms in `lam`.
"""
