"""Statistical checks used by the verification suites.

A check compares sampler output against an oracle and produces a
`CheckResult`.  Checks based on a test statistic carry a p-value and get
their pass threshold assigned by `finalize_suite`, which Bonferroni-adjusts
a familywise level of `alpha` across the p-valued checks of a suite, so a
suite of m such checks passes a check iff p >= alpha / m.  Moment and exact
checks pass or fail on their own (a wide n-sigma band, or an absolute
tolerance) and are not adjusted.

All randomness is derived from `make_rng(seed, *keys)`, so every suite is a
pure function of its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np
from scipy import stats as sps


def make_rng(seed: int, *keys) -> np.random.Generator:
    """Deterministic generator for the given seed and sub-stream keys.

    String keys are folded into the seed sequence entropy byte-wise, so
    streams for different keys are independent and reproducible.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for k in keys:
        if isinstance(k, str):
            entropy.append(int.from_bytes(k.encode("utf8"), "little"))
        else:
            entropy.append(int(k))
    return np.random.default_rng(np.random.SeedSequence(entropy))


@dataclass(frozen=True)
class CheckResult:
    name: str
    kind: str                    # "ks" | "chi2" | "moment" | "exact"
    statistic: float
    p_value: float | None
    passed: bool
    threshold: float | None = None
    detail: str = ""

    def line(self) -> str:
        flag = "pass" if self.passed else "FAIL"
        if self.p_value is not None:
            body = f"stat={self.statistic:.4g} p={self.p_value:.4g}"
            if self.threshold is not None:
                body += f" (level {self.threshold:.3g})"
        else:
            body = f"stat={self.statistic:.4g}"
            if self.threshold is not None:
                body += f" (tol {self.threshold:.3g})"
        out = f"[{flag}] {self.name}: {body}"
        if self.detail:
            out += f" -- {self.detail}"
        return out


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    checks: tuple
    alpha: float                 # familywise level across p-valued checks
    level: float                 # per-check level actually applied
    runtime: float = field(compare=False, default=0.0)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        head = "PASS" if self.passed else "FAIL"
        out = [
            f"suite {self.suite} seed={self.seed}: {head} "
            f"({sum(c.passed for c in self.checks)}/{len(self.checks)} checks, "
            f"{self.runtime:.1f}s)"
        ]
        out.extend("  " + c.line() for c in self.checks)
        return out

    def rows(self) -> list[dict]:
        # passed_raw ignores the Bonferroni adjustment (level alpha per check)
        return [
            {
                "suite": self.suite,
                "seed": self.seed,
                "check": c.name,
                "kind": c.kind,
                "statistic": c.statistic,
                "p_value": "" if c.p_value is None else c.p_value,
                "threshold": "" if c.threshold is None else c.threshold,
                "passed": c.passed,
                "passed_raw": c.passed if c.p_value is None
                              else bool(c.p_value >= self.alpha),
                "detail": c.detail,
            }
            for c in self.checks
        ]


def finalize_suite(suite: str, seed: int, checks: Sequence[CheckResult],
                   alpha: float = 0.01, runtime: float = 0.0) -> SuiteReport:
    """Apply the Bonferroni-adjusted level to the p-valued checks."""
    m = sum(1 for c in checks if c.p_value is not None)
    level = alpha / m if m else alpha
    adjusted = []
    for c in checks:
        if c.p_value is None:
            adjusted.append(c)
        else:
            adjusted.append(
                replace(c, passed=bool(c.p_value >= level), threshold=level)
            )
    return SuiteReport(
        suite=suite,
        seed=seed,
        checks=tuple(adjusted),
        alpha=alpha,
        level=level,
        runtime=runtime,
    )


# ---------------------------------------------------------------------------
# p-valued checks


def ks_check(name: str, a, b) -> CheckResult:
    """Two-sample Kolmogorov-Smirnov check (asymptotic p-value)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 10 or b.size < 10:
        raise ValueError("KS check needs at least 10 samples per side")
    res = sps.ks_2samp(a, b, method="asymp")
    return CheckResult(
        name=name,
        kind="ks",
        statistic=float(res.statistic),
        p_value=float(res.pvalue),
        passed=True,  # threshold applied in finalize_suite
        detail=f"n={a.size}/{b.size}",
    )


def chi2_goodness(name: str, observed: Mapping, probs: Mapping,
                  min_expected: float = 5.0) -> CheckResult:
    """Chi-square goodness of fit of observed category counts to exact
    probabilities.

    ``probs`` may sum to less than one; the remaining mass becomes a rest
    bucket, which also absorbs observed outcomes outside the listed support.
    Categories with expected count below ``min_expected`` are pooled into
    the rest bucket.  An observed outcome carrying zero expected mass fails
    the check outright.
    """
    n = sum(observed.values())
    if n <= 0:
        raise ValueError("chi-square check needs observations")
    listed = list(probs.keys())
    obs_listed = {k: observed.get(k, 0) for k in listed}
    rest_obs = n - sum(obs_listed.values())
    rest_p = max(0.0, 1.0 - sum(probs.values()))

    f_obs, f_exp, pooled = [], [], 0
    pool_obs, pool_p = rest_obs, rest_p
    for k in listed:
        exp = n * probs[k]
        if exp < min_expected:
            pool_obs += obs_listed[k]
            pool_p += probs[k]
            pooled += 1
        else:
            f_obs.append(obs_listed[k])
            f_exp.append(exp)
    if pool_p * n > 0 or pool_obs > 0:
        if pool_p <= 0 and pool_obs > 0:
            return CheckResult(
                name=name, kind="chi2", statistic=math.inf, p_value=0.0,
                passed=False,
                detail=f"{pool_obs} observations outside the expected support",
            )
        if pool_p > 0:
            f_obs.append(pool_obs)
            f_exp.append(n * pool_p)
    if len(f_obs) < 2:
        # everything in one bucket: nothing to test beyond support containment
        return CheckResult(
            name=name, kind="chi2", statistic=0.0, p_value=1.0, passed=True,
            detail="degenerate (single category)",
        )
    f_obs = np.asarray(f_obs, dtype=float)
    f_exp = np.asarray(f_exp, dtype=float)
    f_exp *= f_obs.sum() / f_exp.sum()
    res = sps.chisquare(f_obs, f_exp)
    return CheckResult(
        name=name,
        kind="chi2",
        statistic=float(res.statistic),
        p_value=float(res.pvalue),
        passed=True,
        detail=f"n={n}, {len(f_obs)} bins" + (f", {pooled} pooled" if pooled else ""),
    )


def chi2_two_sample(name: str, counts_a: Mapping, counts_b: Mapping,
                    min_combined: int = 10) -> CheckResult:
    """Chi-square homogeneity check of two independent count tables.

    Categories whose combined count is below ``min_combined`` are pooled.
    """
    keys = sorted(set(counts_a) | set(counts_b), key=repr)
    a = np.array([counts_a.get(k, 0) for k in keys], dtype=float)
    b = np.array([counts_b.get(k, 0) for k in keys], dtype=float)
    if a.sum() <= 0 or b.sum() <= 0:
        raise ValueError("two-sample chi-square needs observations on both sides")
    small = (a + b) < min_combined
    if small.any():
        a = np.append(a[~small], a[small].sum())
        b = np.append(b[~small], b[small].sum())
        keep = (a + b) > 0
        a, b = a[keep], b[keep]
    if len(a) < 2:
        return CheckResult(
            name=name, kind="chi2", statistic=0.0, p_value=1.0, passed=True,
            detail="degenerate (single category)",
        )
    res = sps.chi2_contingency(np.vstack([a, b]))
    return CheckResult(
        name=name,
        kind="chi2",
        statistic=float(res.statistic),
        p_value=float(res.pvalue),
        passed=True,
        detail=f"n={int(a.sum())}/{int(b.sum())}, {len(a)} bins",
    )


def calibration_check(name: str, probs, outcomes, bins: int = 10) -> CheckResult:
    """Binned chi-square for per-observation success probabilities.

    ``probs[i]`` is the predicted probability of ``outcomes[i]`` (0/1).
    Observations are sorted by predicted probability and grouped into
    ``bins`` quantile bins; each bin contributes
    (O - E)^2 / Var with E = sum p, Var = sum p(1-p), and the total is
    referred to a chi-square with one degree of freedom per usable bin.
    Bins with Var < 4 are merged forward to keep the approximation sound.
    """
    p = np.asarray(probs, dtype=float)
    x = np.asarray(outcomes, dtype=float)
    if p.shape != x.shape or p.ndim != 1:
        raise ValueError("probs and outcomes must be matching 1-d arrays")
    if p.size == 0:
        raise ValueError("calibration check needs observations")
    order = np.argsort(p, kind="stable")
    p, x = p[order], x[order]
    edges = np.unique(np.linspace(0, p.size, bins + 1).astype(int))
    stat, df = 0.0, 0
    co = ce = cv = 0.0  # carried observed / expected / variance
    for lo, hi in zip(edges[:-1], edges[1:]):
        co += float(x[lo:hi].sum())
        ce += float(p[lo:hi].sum())
        cv += float((p[lo:hi] * (1.0 - p[lo:hi])).sum())
        if cv >= 4.0:
            stat += (co - ce) ** 2 / cv
            df += 1
            co = ce = cv = 0.0
    if cv > 0.0 and df == 0:
        stat += (co - ce) ** 2 / cv
        df = 1
    if df == 0:
        # degenerate probabilities (all 0 or 1): outcomes must match exactly
        ok = bool(np.all(x == p))
        return CheckResult(
            name=name, kind="chi2", statistic=0.0 if ok else math.inf,
            p_value=1.0 if ok else 0.0, passed=ok,
            detail="degenerate probabilities",
        )
    pv = float(sps.chi2.sf(stat, df))
    return CheckResult(
        name=name, kind="chi2", statistic=float(stat), p_value=pv, passed=True,
        detail=f"n={p.size}, {df} bins",
    )


# ---------------------------------------------------------------------------
# self-thresholding checks


def moment_check(name: str, samples, expected, n_sigma: float = 4.0,
                 exact_tol: float = 1e-9) -> CheckResult:
    """Empirical mean against an exact value, within n_sigma standard errors.

    ``samples`` is (n,) or (n, k); ``expected`` a scalar or (k,).  A
    component with zero empirical variance must match exactly (within
    ``exact_tol``).
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    exp = np.broadcast_to(np.asarray(expected, dtype=float).ravel(), (arr.shape[1],))
    n = arr.shape[0]
    if n < 2:
        raise ValueError("moment check needs at least 2 samples")
    mean = arr.mean(axis=0)
    se = arr.std(axis=0, ddof=1) / math.sqrt(n)
    diff = np.abs(mean - exp)
    z = np.where(se > 0, diff / np.where(se > 0, se, 1.0), np.inf)
    ok = np.where(se > 0, z <= n_sigma, diff <= exact_tol)
    worst = int(np.argmax(np.where(se > 0, z / n_sigma, diff / exact_tol)))
    stat = float(z[worst]) if se[worst] > 0 else float(diff[worst])
    return CheckResult(
        name=name,
        kind="moment",
        statistic=stat,
        p_value=None,
        passed=bool(ok.all()),
        threshold=n_sigma if se[worst] > 0 else exact_tol,
        detail=(
            f"worst component {worst}: mean={mean[worst]:.6g} "
            f"expected={exp[worst]:.6g} se={se[worst]:.3g} (n={n})"
        ),
    )


def exact_check(name: str, value: float, expected: float,
                tol: float) -> CheckResult:
    """Absolute-tolerance check for identities that must hold exactly."""
    diff = abs(float(value) - float(expected))
    return CheckResult(
        name=name,
        kind="exact",
        statistic=diff,
        p_value=None,
        passed=bool(diff <= tol),
        threshold=tol,
        detail=f"value={value:.12g} expected={expected:.12g}",
    )


def bool_check(name: str, ok: bool, detail: str = "") -> CheckResult:
    """Pass/fail structural assertion (no statistic)."""
    return CheckResult(
        name=name,
        kind="exact",
        statistic=0.0 if ok else 1.0,
        p_value=None,
        passed=bool(ok),
        threshold=None,
        detail=detail,
    )
