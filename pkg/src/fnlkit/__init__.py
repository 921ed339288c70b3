"""fnlkit: a workbench for nonassociative Lambek calculi.

Covers the boolean, bounded-distributive and plain distributive families
(with and without empty antecedents, exchange, modalities and a unit),
their ternary relational semantics, a modal-logic tableau, the embedding
pipeline between the modal and substructural sides, budgeted proof search
with certified strategies, and an independent derivation checker.
"""

__version__ = "0.1.0"
