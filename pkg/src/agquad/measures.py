"""Moment sequences for built-in measures and for sampled functions.

Moments on the core path come from closed forms only; the Hankel solve is
far too ill-conditioned to tolerate numerically integrated moments.  The
numerical-integration cross-checks live in `agquad.reference`.
"""

from dataclasses import dataclass

import mpmath as mp

from .context import DEFAULT_BUILD_DPS, working_dps
from .errors import ContractViolation, SampleFormatError

KIND_POWER = "power"
KIND_TRIG = "trigonometric"


@dataclass(frozen=True)
class MomentSequence:
    """Ordered moments of a measure: power moments or trigonometric moments."""

    kind: str
    values: tuple
    descriptor: str

    def __post_init__(self):
        if self.kind not in (KIND_POWER, KIND_TRIG):
            raise ContractViolation(f"unknown moment kind {self.kind!r}")
        if len(self.values) < 1:
            raise ContractViolation("moment sequence must be nonempty")
        if any(not mp.isfinite(v) for v in self.values):
            raise ContractViolation("moments must be finite")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]


@dataclass(frozen=True)
class SampleGrid:
    """Uniform samples of a function: samples[n] = f(a + n*(b-a)/M)."""

    a: mp.mpf
    b: mp.mpf
    M: int
    samples: tuple

    def __post_init__(self):
        if not self.b > self.a:
            raise ContractViolation("need b > a")
        if self.M < 2:
            raise ContractViolation("need M >= 2")
        if len(self.samples) != self.M + 1:
            raise ContractViolation(
                f"expected {self.M + 1} samples, got {len(self.samples)}")

    @property
    def step(self):
        return (self.b - self.a) / self.M

    def point(self, n):
        return self.a + n * (self.b - self.a) / self.M


def _count(L):
    if L < 0:
        raise ContractViolation("moment count must be >= 0")
    return int(L) + 1


def lebesgue_pm1(L, dps=DEFAULT_BUILD_DPS):
    """Moments of dx on [-1, 1]: 2/(n+1) for even n, 0 for odd n."""
    with working_dps(dps):
        vals = tuple(mp.mpf(2) / (n + 1) if n % 2 == 0 else mp.mpf(0)
                     for n in range(_count(L)))
    return MomentSequence(KIND_POWER, vals, "lebesgue_pm1")


def lebesgue_01(L, dps=DEFAULT_BUILD_DPS):
    """Moments of dx on [0, 1]: 1/(n+1)."""
    with working_dps(dps):
        vals = tuple(mp.mpf(1) / (n + 1) for n in range(_count(L)))
    return MomentSequence(KIND_POWER, vals, "lebesgue_01")


def chebyshev1(L, dps=DEFAULT_BUILD_DPS):
    """Moments of dx/sqrt(1-x^2) on (-1, 1): pi*C(n, n/2)/2^n for even n."""
    with working_dps(dps):
        vals = tuple(
            mp.pi * mp.binomial(n, n // 2) / mp.mpf(2) ** n if n % 2 == 0
            else mp.mpf(0)
            for n in range(_count(L)))
    return MomentSequence(KIND_POWER, vals, "chebyshev1")


def logweight_01(L, dps=DEFAULT_BUILD_DPS):
    """Moments of the signed measure log(x) dx on (0, 1]: -1/(n+1)^2."""
    with working_dps(dps):
        vals = tuple(-mp.mpf(1) / (n + 1) ** 2 for n in range(_count(L)))
    return MomentSequence(KIND_POWER, vals, "logweight_01")


def trig_lebesgue_pm1(L, dps=DEFAULT_BUILD_DPS):
    """Trigonometric moments of dx on [-1, 1]: tau_n = 2 sin(n)/n, tau_0 = 2."""
    with working_dps(dps):
        vals = tuple(mp.mpf(2) if n == 0 else 2 * mp.sin(mp.mpf(n)) / n
                     for n in range(_count(L)))
    return MomentSequence(KIND_TRIG, vals, "trig_lebesgue_pm1")


def custom(moment_fn, L, kind=KIND_POWER, descriptor="custom",
           dps=DEFAULT_BUILD_DPS):
    """Moment sequence from a user closed-form callback n -> moment."""
    with working_dps(dps):
        vals = tuple(mp.mpmathify(moment_fn(n)) for n in range(_count(L)))
    return MomentSequence(kind, vals, descriptor)


def moments_from_samples(grid):
    """Trigonometric moments of a sampled function are the samples themselves."""
    return MomentSequence(
        KIND_TRIG, tuple(grid.samples),
        f"samples(a={mp.nstr(grid.a, 12)}, b={mp.nstr(grid.b, 12)}, M={grid.M})")


# ---------------------------------------------------------------------------
# sample CSV format: line 1 "a,<dec>", line 2 "b,<dec>", line 3 "M,<int>",
# then M+1 lines "<re>" or "<re>,<im>".  Decimal strings, UTF-8.
# ---------------------------------------------------------------------------

def _parse_decimal(text, lineno):
    try:
        return mp.mpf(text.strip())
    except ValueError:
        raise SampleFormatError(f"not a decimal number: {text!r}", line=lineno)


def load_samples_csv(path, dps=DEFAULT_BUILD_DPS):
    """Parse a sample grid CSV; raises SampleFormatError with a line number."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) < 3:
        raise SampleFormatError("file must have a, b, M header lines", line=1)
    with working_dps(dps):
        header = {}
        for lineno, key in ((1, "a"), (2, "b"), (3, "M")):
            parts = lines[lineno - 1].split(",")
            if len(parts) != 2 or parts[0].strip() != key:
                raise SampleFormatError(
                    f"expected '{key},<value>', got {lines[lineno - 1]!r}",
                    line=lineno)
            header[key] = parts[1]
        a = _parse_decimal(header["a"], 1)
        b = _parse_decimal(header["b"], 2)
        try:
            m_count = int(header["M"].strip())
        except ValueError:
            raise SampleFormatError(f"M must be an integer, got {header['M']!r}",
                                    line=3)
        body = lines[3:]
        if len(body) != m_count + 1:
            raise SampleFormatError(
                f"expected {m_count + 1} sample lines, found {len(body)}",
                line=len(lines))
        samples = []
        for offset, ln in enumerate(body):
            lineno = 4 + offset
            parts = ln.split(",")
            if len(parts) == 1:
                samples.append(_parse_decimal(parts[0], lineno))
            elif len(parts) == 2:
                samples.append(mp.mpc(_parse_decimal(parts[0], lineno),
                                      _parse_decimal(parts[1], lineno)))
            else:
                raise SampleFormatError(
                    f"expected '<re>' or '<re>,<im>', got {ln!r}", line=lineno)
        return SampleGrid(a=a, b=b, M=m_count, samples=tuple(samples))


def save_samples_csv(path, grid, dps=DEFAULT_BUILD_DPS):
    """Write a grid in the format load_samples_csv reads (decimal strings)."""
    digits = dps + 8
    with working_dps(dps):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"a,{mp.nstr(grid.a, digits)}\n")
            fh.write(f"b,{mp.nstr(grid.b, digits)}\n")
            fh.write(f"M,{grid.M}\n")
            for v in grid.samples:
                if isinstance(v, mp.mpc):
                    fh.write(f"{mp.nstr(v.real, digits)},{mp.nstr(v.imag, digits)}\n")
                else:
                    fh.write(f"{mp.nstr(v, digits)}\n")
