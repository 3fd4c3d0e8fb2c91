"""Finite computational category theory for operads and their relatives.

Modules follow the layers of the construction: `fincat` (finite categories,
coends), `diagrams` (string diagrams and variants), `bang` (!C and ?C),
`prof` (profunctors), `distlaw`, `cokleisli`, `operads` and `properads`.
"""

__version__ = '0.1.0'
