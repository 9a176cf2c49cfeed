"""Per-volume citation accrual curves and their transformations.

A raw curve lists citations per age (years since publication) for one
journal volume.  Cumulative curves are prefix sums; standardized curves
rescale the cumulative count so the value at age 2 is exactly 100, which
makes volumes of very different sizes comparable and exposes each journal's
characteristic accrual shape.  Averaging across volumes is "ragged": each
age is averaged only over the volumes old enough to have observed it.

Curve values are exact (ints or Fractions); rescaling and averaging never
round.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from statistics import median
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, DegenerateVolumeError
from .ledger import CitationProfile

KIND_RAW = "raw"
KIND_CUMULATIVE = "cumulative"
KIND_STANDARDIZED = "standardized"

USE_TOTAL = "total"
USE_NONSELF = "nonself"

SELF_CITATION_SPIKE = "SelfCitationSpike"
ACCRUAL_DEVIATION = "AccrualDeviation"

CLASS_HARE = "Hare"
CLASS_TORTOISE = "Tortoise"
CLASS_INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class AccrualCurve:
    """Citations per age for one volume (pub_year None = averaged curve)."""

    journal: str
    pub_year: int | None
    kind: str
    values: tuple
    observations: tuple[int, ...] | None = None

    def max_age(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class AnomalyFinding:
    journal: str
    pub_year: int
    age: int
    deviation: Fraction  # signed percentage points vs the reference
    reason: str


@dataclass(frozen=True)
class AnomalyThresholds:
    """Detection thresholds: self-rate as a fraction, deviation in percentage points."""

    self_rate: Fraction = Fraction(1, 2)
    deviation_pp: Fraction = Fraction(25)

    def __post_init__(self):
        if not 0 < self.self_rate <= 1:
            raise ConfigError("self-rate threshold must be in (0, 1]")
        if self.deviation_pp <= 0:
            raise ConfigError("deviation threshold must be positive")


@dataclass(frozen=True)
class ClassificationThresholds:
    """Coverage cutoffs separating fast-accruing from slow-accruing journals."""

    hare: Fraction = Fraction(1, 4)
    tortoise: Fraction = Fraction(3, 20)

    def __post_init__(self):
        if self.hare <= self.tortoise:
            raise ConfigError("hare threshold must exceed tortoise threshold")


def accrual_curve(
    profile: CitationProfile, pub_year: int, max_age: int, use: str = USE_TOTAL
) -> AccrualCurve:
    """Raw curve for one volume over ages 0..max_age; missing cells are zeros."""
    if max_age < 0:
        raise ValueError("max_age must be >= 0")
    if use not in (USE_TOTAL, USE_NONSELF):
        raise ValueError(f"unknown counting mode {use!r}")
    values = []
    for age in range(max_age + 1):
        cell = profile.cells.get((pub_year, pub_year + age))
        if cell is None:
            values.append(0)
        elif use == USE_TOTAL:
            values.append(cell.total)
        else:
            values.append(cell.total - cell.self_count)
    return AccrualCurve(profile.journal, pub_year, KIND_RAW, tuple(values))


def cumulative(curve: AccrualCurve) -> AccrualCurve:
    """Prefix sums of a raw curve."""
    if curve.kind != KIND_RAW:
        raise ValueError(f"expected a raw curve, got {curve.kind!r}")
    running = 0
    values = []
    for v in curve.values:
        running += v
        values.append(running)
    return AccrualCurve(curve.journal, curve.pub_year, KIND_CUMULATIVE, tuple(values),
                        curve.observations)


def standardize_to_age2(curve: AccrualCurve) -> AccrualCurve:
    """Rescale a cumulative curve so the count accrued through age 2 is 100.

    The anchor is the cumulative value at age 2, i.e. citations at ages
    0+1+2.  Volumes with a zero anchor (no citations in their first three
    years) raise DegenerateVolumeError and are excluded from averaged
    analyses by callers.
    """
    if curve.kind != KIND_CUMULATIVE:
        raise ValueError(f"expected a cumulative curve, got {curve.kind!r}")
    pub_year = curve.pub_year if curve.pub_year is not None else 0
    if len(curve.values) < 3:
        raise DegenerateVolumeError(curve.journal, pub_year)
    anchor = curve.values[2]
    if anchor == 0:
        raise DegenerateVolumeError(curve.journal, pub_year)
    values = tuple(Fraction(v * 100, anchor) for v in curve.values)
    return AccrualCurve(curve.journal, curve.pub_year, KIND_STANDARDIZED, values,
                        curve.observations)


def mean_accrual_curve(curves: Sequence[AccrualCurve], horizon: int) -> AccrualCurve:
    """Ragged pointwise mean of raw volume curves over ages 0..horizon.

    Each age is averaged only over the volumes whose curve extends that far
    (a volume's curve length encodes how many ages it has observed), and the
    per-age observation counts are attached to the result since the oldest
    ages may rest on very few volumes.  An age no volume observed is an
    error naming that age.
    """
    if not curves:
        raise ValueError("mean_accrual_curve needs at least one curve")
    journal = curves[0].journal
    seen_years = set()
    for curve in curves:
        if curve.kind != KIND_RAW:
            raise ValueError(f"expected raw curves, got {curve.kind!r}")
        if curve.pub_year is None or curve.pub_year in seen_years:
            raise ValueError("volume curves must carry distinct pub_years")
        seen_years.add(curve.pub_year)
    values = []
    observations = []
    for age in range(horizon + 1):
        observed = [c.values[age] for c in curves if age < len(c.values)]
        if not observed:
            raise ValueError(f"no volume observes age {age}")
        values.append(Fraction(sum(observed), len(observed)))
        observations.append(len(observed))
    return AccrualCurve(journal, None, KIND_RAW, tuple(values), tuple(observations))


def volume_curves(
    profile: CitationProfile, use: str = USE_TOTAL, observation_end: int | None = None
) -> dict[int, AccrualCurve]:
    """Raw curve per publication year, each as long as the ledger can observe.

    observation_end defaults to the last citing year present anywhere in the
    profile, so a volume published in year y gets ages 0..(end - y).
    """
    years = profile.pub_years()
    if not years:
        return {}
    if observation_end is None:
        observation_end = max(profile.citing_years())
    return {
        year: accrual_curve(profile, year, observation_end - year, use)
        for year in years
        if year <= observation_end
    }


def standardized_volume_curves(
    volumes: Mapping[int, AccrualCurve]
) -> tuple[dict[int, AccrualCurve], list[int]]:
    """Standardize each volume curve; returns (curves, skipped pub_years).

    Volumes too young to reach age 2 or with a zero anchor are skipped, not
    fatal: one empty volume should not sink the whole journal.
    """
    result: dict[int, AccrualCurve] = {}
    skipped: list[int] = []
    for year, curve in volumes.items():
        try:
            result[year] = standardize_to_age2(cumulative(curve))
        except DegenerateVolumeError:
            skipped.append(year)
    return result, skipped


def observable_horizon(profile: CitationProfile) -> int:
    """Largest age any volume in the profile could have been observed at."""
    if not profile.cells:
        return 0
    return max(profile.citing_years()) - min(profile.pub_years())


def detect_anomalous_volumes(
    standardized: Mapping[int, AccrualCurve],
    self_rates: Mapping[int, Mapping[int, Fraction]],
    thresholds: AnomalyThresholds = AnomalyThresholds(),
) -> list[AnomalyFinding]:
    """Flag volumes that stand out from their journal's usual pattern.

    SelfCitationSpike: some citing year's self-reference rate reaches the
    self-rate threshold (deviation is recorded in percentage points).
    AccrualDeviation: the standardized curve strays from the pointwise
    median of all volumes by at least the deviation threshold.  The median
    is the reference on purpose: a mean would be dragged toward the very
    spike being hunted.
    """
    if len(standardized) < 3:
        raise ValueError("anomaly detection needs at least 3 standardized volumes")
    journal = next(iter(standardized.values())).journal
    findings: list[AnomalyFinding] = []

    for pub_year in sorted(self_rates):
        for citing_year, rate in self_rates[pub_year].items():
            if rate >= thresholds.self_rate:
                findings.append(
                    AnomalyFinding(
                        journal,
                        pub_year,
                        citing_year - pub_year,
                        rate * 100,
                        SELF_CITATION_SPIKE,
                    )
                )

    max_len = max(len(c.values) for c in standardized.values())
    medians = []
    for age in range(max_len):
        observed = [c.values[age] for c in standardized.values() if age < len(c.values)]
        medians.append(median(observed) if observed else None)
    for pub_year in sorted(standardized):
        curve = standardized[pub_year]
        for age, value in enumerate(curve.values):
            reference = medians[age]
            if reference is None:
                continue
            deviation = value - reference
            if abs(deviation) >= thresholds.deviation_pp:
                findings.append(
                    AnomalyFinding(journal, pub_year, age, deviation, ACCRUAL_DEVIATION)
                )
    return findings


def classify_journal(
    coverage: Fraction | float,
    thresholds: ClassificationThresholds = ClassificationThresholds(),
) -> str:
    """Class a journal by how much of its horizon total the window captures."""
    if not 0 <= coverage <= 1:
        raise ValueError("coverage must be in [0, 1]")
    if coverage >= thresholds.hare:
        return CLASS_HARE
    if coverage <= thresholds.tortoise:
        return CLASS_TORTOISE
    return CLASS_INTERMEDIATE


def curves_to_csv(curves: Iterable[AccrualCurve]) -> str:
    """Curve table: journal,pub_year,kind,age,value,observations.

    pub_year is blank for averaged curves; observations is blank everywhere
    else.  Values print as floats (repr), deterministically.
    """
    lines = ["journal,pub_year,kind,age,value,observations"]
    for curve in curves:
        year = "" if curve.pub_year is None else str(curve.pub_year)
        for age, value in enumerate(curve.values):
            obs = ""
            if curve.observations is not None:
                obs = str(curve.observations[age])
            lines.append(f"{curve.journal},{year},{curve.kind},{age},{float(value)!r},{obs}")
    return "\n".join(lines) + "\n"
