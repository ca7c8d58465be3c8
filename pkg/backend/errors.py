class IntersectionFormsError(Exception):
    """Base class for every error raised by the engine."""


class InputError(IntersectionFormsError, ValueError):
    pass


class SizeLimitError(IntersectionFormsError, ValueError):
    pass


class GenericityError(IntersectionFormsError, ValueError):
    """An affine system on a circuit of the normal matroid is feasible."""

    def __init__(self, circuit: tuple[str, ...], rank: int, augmented_rank: int) -> None:
        self.circuit = circuit
        self.rank = rank
        self.augmented_rank = augmented_rank
        msg = (
            f"hyperplanes {list(circuit)} meet in a common point: "
            f"coefficient rank {rank} equals augmented rank {augmented_rank}"
        )
        super().__init__(msg)


class InvariantViolation(IntersectionFormsError, RuntimeError):
    pass


class ExactDivisionError(IntersectionFormsError, ArithmeticError):
    pass


class RetryExhaustedError(IntersectionFormsError, RuntimeError):
    """A seeded random draw found no admissible value within its retry budget."""
