"""PyTHRS: three-operator Heisenberg-Robertson-Schrodinger relations.

Subpackages:
    spaces       weighted pointwise 3-product spaces and the axiom checks
    operators    linear operators and 3-self-adjointness
    uncertainty  3-uncertainties, the inequality chain and the classical suite
    sharpness    search for the sharpest instances of the chain
    cli          the ``pythrs`` command
"""

__version__ = "0.1.0"
