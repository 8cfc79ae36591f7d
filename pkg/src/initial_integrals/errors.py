"""Exception types shared across modules."""


class AxiomViolation(ValueError):
    """A target object fails one of the axioms of its category.

    ``axiom`` names the violated condition (e.g. ``"contraction"`` or
    ``"(III)"``); ``witness`` carries the offending input when one is known.
    """

    def __init__(self, axiom: str, message: str, witness=None):
        super().__init__(f"axiom {axiom} violated: {message}")
        self.axiom = axiom
        self.witness = witness
