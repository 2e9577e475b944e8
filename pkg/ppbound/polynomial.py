"""Dense polynomials over Q of degree at least 2."""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from ppbound.errors import ArgumentError, DegreeError


def _strip(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return coeffs[:end]


@dataclass(frozen=True)
class Polynomial:
    """
    phi(z) = a_0 + a_1 z + ... + a_d z^d with a_d != 0 and d >= 2.

    Coefficients are stored low degree first.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = _strip(tuple(Fraction(c) for c in self.coeffs))
        if len(coeffs) < 3:
            raise DegreeError(
                f"Polynomial must have degree at least 2, got {len(coeffs) - 1}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coefficients(cls, *coeffs: int | Fraction | str) -> "Polynomial":
        """Build from a_0, a_1, ..., a_d."""
        return cls(tuple(Fraction(c) for c in coeffs))

    @classmethod
    def quadratic(cls, c: Fraction | int) -> "Polynomial":
        """z^2 + c."""
        return cls((Fraction(c), Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __call__(self, x: Fraction) -> Fraction:
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def quadratic_parameter(self) -> Fraction | None:
        """c when phi is exactly z^2 + c, else None."""
        if self.degree == 2 and self.coeffs[2] == 1 and self.coeffs[1] == 0:
            return self.coeffs[0]
        return None

    def compose_affine(self, alpha: Fraction, beta: Fraction) -> tuple[Fraction, ...]:
        """Coefficients of phi(alpha*z + beta), low degree first."""
        alpha, beta = Fraction(alpha), Fraction(beta)
        out = [Fraction(0)] * len(self.coeffs)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            # a (alpha z + beta)^i
            for j in range(i + 1):
                out[j] += a * comb(i, j) * alpha**j * beta ** (i - j)
        return tuple(out)

    def conjugate(self, alpha: Fraction | int, beta: Fraction | int = 0) -> "Polynomial":
        """
        h^-1 o phi o h for h(z) = alpha*z + beta.

        The preperiodic points of the result are h^-1 of those of phi.
        """
        alpha, beta = Fraction(alpha), Fraction(beta)
        if alpha == 0:
            raise ArgumentError("Conjugation needs alpha != 0")
        shifted = list(self.compose_affine(alpha, beta))
        shifted[0] -= beta
        return Polynomial(tuple(c / alpha for c in shifted))

    def translate(self, b: Fraction | int) -> "Polynomial":
        """phi(z + b) - b."""
        return self.conjugate(1, b)

    def __str__(self) -> str:
        from ppbound.parsing import render

        return render(self)
