"""Acceptance criteria 1-10.

Each criterion is a function returning ``(passed, detail)``; the pytest
wrapper times it, records a one-line verdict (printed in the terminal
summary by conftest.py) and asserts both the criterion and its runtime
limit. Running this file as a script prints the same lines.
"""

import io
import itertools
import json
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from qzeta import (
    PoleProximityError,
    Regime,
    ScanSpec,
    Tolerance,
    check_bound,
    choose_n,
    classical_zeta,
    complex_pow,
    epsilon_margin,
    fit_mu,
    scan_vertical,
    zeta_q,
    zeta_q_continued,
    zeta_q_direct,
    zeta_q_single,
)
from qzeta.cli import main

sys.path.insert(0, str(Path(__file__).parent))
from shape_grids import binomial_log_ratios  # noqa: E402

pytestmark = pytest.mark.acceptance

VERDICTS = {}

SLOPE = 1 + math.pi / 2
Q_GRID = (0.3, 0.5, 0.9)
SIGMA_GRID = (-1.0, 0.0, 0.5, 2.0)
V_GRID = (0.0, 5.0, 25.0)
# the grid fixes Re t only; both a real and a non-real Im t are sampled
IM_T_GRID = (0.0, 1.3)


def _rel(a, b):
    return abs(a - b) / abs(b)


def _n_values(q, re_t, v):
    return sorted({1, 5, choose_n(q, re_t, max(abs(v), 1.0))})


def criterion_1():
    worst, count = 0.0, 0
    for q, sigma, v, re_t, im_t in itertools.product(Q_GRID, SIGMA_GRID, V_GRID, (0.5, 1.0, 2.0), IM_T_GRID):
        s, t = complex(sigma, v), complex(re_t, im_t)
        ref = zeta_q_direct(q, s, t).value
        for n in _n_values(q, re_t, v):
            worst = max(worst, _rel(zeta_q_continued(q, s, t, n).value, ref))
            count += 1
    return worst < 1e-8, f"{count} comparisons, worst relative difference {worst:.2e} (limit 1e-08)"


def criterion_2():
    worst, count = 0.0, 0
    for q, sigma, v, re_t, im_t in itertools.product(
        Q_GRID, SIGMA_GRID, V_GRID, (-0.5, -0.1, 0.5, 1.0, 2.0), IM_T_GRID
    ):
        s, t = complex(sigma, v), complex(re_t, im_t)
        for n in _n_values(q, re_t, v):
            a = zeta_q_continued(q, s, t, n).value
            b = zeta_q_continued(q, s, t, n + 20).value
            worst = max(worst, _rel(b, a))
            count += 1
    return worst < 1e-8, f"{count} N vs N+20 pairs, worst relative difference {worst:.2e} (limit 1e-08)"


def criterion_3():
    rng = np.random.default_rng(20240611)
    tight = Tolerance(rel_tol=1e-13)
    worst = 0.0
    for _ in range(50):
        q = float(rng.uniform(0.05, 0.95))
        t = complex(rng.uniform(0.05, 4.0), rng.uniform(-20.0, 20.0))
        qt = complex_pow(q, t)
        ref = qt / (1 - qt)
        worst = max(worst, _rel(zeta_q_direct(q, 0, t, tight).value, ref))
        worst = max(worst, _rel(zeta_q_continued(q, 0, t, choose_n(q, t.real, 1.0), tight).value, ref))
    return worst < 1e-12, f"50 random (q, t), both paths, worst relative error {worst:.2e} (limit 1e-12)"


def criterion_4():
    details, ok = [], True
    for s in (2, 3):
        target = classical_zeta(s)
        errs = [abs(zeta_q_single(q, s).value - target) for q in (0.9, 0.99, 0.999)]
        ok &= errs[0] > errs[1] > errs[2] and errs[2] < 0.01
        details.append(f"s={s}: " + ", ".join(f"{e:.3e}" for e in errs))
    return ok, "; ".join(details) + " (strictly decreasing, last < 0.01)"


def criterion_5():
    rows = scan_vertical(ScanSpec(0.5, 2.0, np.arange(10.0, 301.0, 1.0)))
    rep = check_bound(rows, Regime.BOUNDED)
    return rep.violations == 0, (
        f"{rep.n_calibration}+{rep.n_verification} rows, violations {rep.violations}, "
        f"max excess over fitted constant {rep.max_ratio_log:.3f} (slack ln 10)"
    )


def criterion_6():
    period = 2 * math.pi / math.log(2)
    v = [(k + 0.5) * period for k in range(1, 40) if (k + 0.5) * period <= 300]
    rows = scan_vertical(ScanSpec(0.5, 1.0, v))
    min_margin = min(r.pole_margin for r in rows)
    rep = check_bound(rows, Regime.LINEAR)
    ok = min_margin > 0.05 and all(r.usable for r in rows) and rep.violations == 0
    return ok, f"{len(rows)} midpoint rows, min epsilon-margin {min_margin:.3f}, violations {rep.violations}"


def criterion_7():
    v = np.arange(10.0, 121.0, 1.0)
    slopes, ok, parts = {}, True, []
    for sigma in (0.25, 0.5, 0.75):
        est = fit_mu(scan_vertical(ScanSpec(0.5, sigma, v)), sigma, "linear_v")
        slopes[sigma] = est.slope
        limit = -(sigma - 1) * SLOPE + 0.05
        if sigma in (0.25, 0.5):
            ok &= est.slope <= limit
        parts.append(f"sigma={sigma}: slope {est.slope:.4f} (rate {limit - 0.05:.4f})")
    ok &= slopes[0.25] > slopes[0.75]
    return ok, "; ".join(parts) + "; slope(0.25) > slope(0.75)"


def criterion_8():
    ratios = np.array([x[3] for x in binomial_log_ratios()])
    excess = float(ratios.max() - np.median(ratios))
    ok = excess <= math.log(10.0)
    return ok, (
        f"{ratios.size} samples; max ratio / median ratio = exp({excess:.1f}) "
        f"(limit 10); max log ratio {ratios.max():.1f}, i.e. the bound itself holds"
    )


def criterion_9():
    vals = []
    for delta in (1e-2, 1e-3, 1e-4):
        t = complex(delta, 0.0)
        vals.append((1 - complex_pow(0.5, t)) * zeta_q(0.5, 2, t).value)
    d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
    ratio = d1 / d2
    return ratio >= 5, f"successive differences {d1:.3e}, {d2:.3e}, shrink factor {ratio:.2f} (need >= 5)"


def criterion_10():
    tests = Path(__file__).parent / "test_cli.py"
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(tests)],
        capture_output=True, text=True, check=False,
    )
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()
    buf = io.StringIO()
    code = main(["scan", "--q", "0.5", "--sigma", "2", "--single", "--v-from", "10", "--v-to", "300",
                 "--v-step", "1", "--check-bound"], stdout=buf)
    trailer = json.loads(buf.getvalue().splitlines()[-1][2:])
    ok = proc.returncode == 0 and code == 0 and trailer["check_bound"]["violations"] == 0
    return ok, f"cli suite: {summary}; criterion-5 scan --check-bound exit {code}"


CRITERIA = [
    (1, "oracle equivalence (continued vs direct)", criterion_1, 10.0),
    (2, "N-independence", criterion_2, 10.0),
    (3, "closed-form exactness at s = 0", criterion_3, None),
    (4, "classical limit q -> 1", criterion_4, 30.0),
    (5, "O(1) regime, sigma = 2", criterion_5, 30.0),
    (6, "O(|v|) regime, sigma = 1 at pole midpoints", criterion_6, None),
    (7, "exponential regime rates and ordering", criterion_7, 60.0),
    (8, "binomial bound shape (10x grid median)", criterion_8, 5.0),
    (9, "simple-pole behavior", criterion_9, None),
    (10, "CLI contract", criterion_10, None),
]


def evaluate(number, name, func, limit):
    start = time.perf_counter()
    passed, detail = func()
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    verdict = "PASS" if passed and in_time else "FAIL"
    budget = f"{elapsed:.2f}s" + (f" / {limit:.0f}s" if limit else "")
    line = f"criterion {number:>2} {verdict}  {name}: {detail} [{budget}]"
    VERDICTS[number] = line
    return passed, in_time, elapsed, line


@pytest.mark.parametrize("number, name, func, limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, name, func, limit):
    passed, in_time, elapsed, line = evaluate(number, name, func, limit)
    print(line)
    assert passed, line
    assert in_time, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for *_, line in results:
        print(line)
    sys.exit(0 if all(p and t for p, t, _, _ in results) else 1)
