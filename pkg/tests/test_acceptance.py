"""Acceptance gate: one test per acceptance criterion, stated tolerances pinned.

Run with `pytest -s tests/test_acceptance.py` to see one PASS/FAIL line
per criterion.
"""

import json
import math
import random
import time
from fractions import Fraction

import pytest

from bellkit import (
    CHSH_MAX_ANGLES,
    SimulationConfig,
    TallyTable,
    chsh_statistic,
    epsilon_floor,
    load_tally,
    min_trials,
    nosignalling_deltas,
    required_skew,
    run_experiment,
    skew,
    uniform_prob_s,
)
from bellkit.cli import main

TWO_SQRT_TWO = 2 * math.sqrt(2)
ANGLES_FLAG = ",".join(repr(a) for a in CHSH_MAX_ANGLES)


def _criterion(number: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {number} {name}: {status}{suffix}")
    assert ok, f"criterion {number} ({name}) failed: {detail}"


def _simulate_cli(tmp_path, model, trials, seed, name="tally.json", extra=()):
    out = tmp_path / name
    started = time.perf_counter()
    code = main([
        "simulate", "--model", model, "--angles", ANGLES_FLAG,
        "--trials", str(trials), "--seed", str(seed),
        "--settings", "uniform", "--out", str(out), *extra,
    ])
    elapsed = time.perf_counter() - started
    assert code == 0
    tally, _ = load_tally(out)
    return tally, elapsed, out


def test_criterion_1_quantum_chsh_maximum(tmp_path, capsys):
    tally, elapsed, _ = _simulate_cli(tmp_path, "quantum", 1_000_000, seed=2026)
    s = chsh_statistic(tally).s
    with capsys.disabled():
        _criterion(
            1, "quantum-chsh-maximum",
            abs(s - TWO_SQRT_TWO) <= 0.02 and elapsed <= 30.0,
            f"S={s:.5f} target={TWO_SQRT_TWO:.5f} elapsed={elapsed:.2f}s",
        )


def test_criterion_2_lhv_bound_respected(tmp_path, capsys):
    tally, _, _ = _simulate_cli(tmp_path, "lhv", 1_000_000, seed=2026)
    s = chsh_statistic(tally).s
    with capsys.disabled():
        _criterion(
            2, "lhv-bound-respected",
            s <= 2.02 and abs(s - 2.0) <= 0.02,
            f"S={s:.5f}",
        )


def test_criterion_3_oracle_exhaustive(capsys):
    failures = []
    elapsed_12 = None
    for k in range(1, 13):
        started = time.perf_counter()
        code = main(["oracle", "--n-per-setting", str(k)])
        elapsed = time.perf_counter() - started
        report = json.loads(capsys.readouterr().out)
        if code != 0 or report["counterexamples"]:
            failures.append(k)
        if k == 12:
            elapsed_12 = elapsed
            checked_12 = report["checked"]
    with capsys.disabled():
        _criterion(
            3, "oracle-exhaustive-necessity",
            not failures and checked_12 == 28561 and elapsed_12 <= 5.0,
            f"K=1..12 failures={failures} checked(K=12)={checked_12} "
            f"elapsed(K=12)={elapsed_12:.2f}s",
        )


def test_criterion_4_uniform_probability_identity(capsys):
    rng = random.Random(40)
    tol = 4 * math.ulp(2.0)
    worst = 0.0
    ok = True
    for _ in range(10_000):
        scale = rng.randint(1, 2000)
        n = rng.randint(0, scale)
        p = n / scale
        t = TallyTable(a=scale, b=scale, c=scale, d=scale,
                       n00=n, n01=n, n10=n, n11=n)
        s = chsh_statistic(t)
        diff = abs(s.s - uniform_prob_s(p))
        worst = max(worst, diff)
        if diff > tol or s.s > 2.0 or s.s_exact > 2:
            ok = False
            break
    with capsys.disabled():
        _criterion(
            4, "uniform-probability-identity",
            ok,
            f"10^4 pairs, worst |S - 2(2P-1)| = {worst:.3e} (tol {tol:.3e}), S <= 2 throughout",
        )


def test_criterion_5_nosignalling_reduction(capsys):
    rng = random.Random(50)
    ok = True
    for _ in range(10_000):
        q = rng.randint(1, 500)
        ns = [rng.randint(0, q) for _ in range(4)]
        t = TallyTable(a=q, b=q, c=q, d=q, n00=ns[0], n01=ns[1], n10=ns[2], n11=ns[3])
        sigma, _, _ = skew(t)
        if nosignalling_deltas(t).epsilon_achieved_exact != Fraction(2 * sigma, 4 * q):
            ok = False
            break
    worked = TallyTable(a=100, b=100, c=100, d=100, n00=50, n01=60, n10=55, n11=45)
    ab = next(d for d in nosignalling_deltas(worked).deltas
              if (d.alpha, d.beta) == ("a", "b"))
    exact_ok = ab.value_exact == Fraction(1, 20) and ab.value == 0.05
    with capsys.disabled():
        _criterion(
            5, "nosignalling-uniform-reduction",
            ok and exact_ok,
            f"10^4 tallies epsilon==2*sigma/N exactly; worked (a,b) delta = {ab.value}",
        )


def test_criterion_6_bounds_arithmetic(capsys):
    rng = random.Random(60)
    mt_ok = min_trials(0.01) == 201
    floor_ok = round(float(epsilon_floor(TWO_SQRT_TWO - 2)), 5) == 0.06904
    identity_ok = True
    for _ in range(1000):
        n = rng.randint(1, 10**6)
        delta = Fraction(rng.randint(0, 4000), rng.randint(1, 1000))
        if required_skew(n, delta) * 3 != Fraction(n) * delta / 8:
            identity_ok = False
            break
    with capsys.disabled():
        _criterion(
            6, "bounds-arithmetic",
            mt_ok and floor_ok and identity_ok,
            f"min_trials(0.01)={min_trials(0.01)}, "
            f"epsilon_floor(2sqrt2-2)={float(epsilon_floor(TWO_SQRT_TWO - 2)):.5f}, "
            f"required_skew*3==N*Delta/8 for 10^3 draws",
        )


def test_criterion_7_determinism(tmp_path, capsys):
    t1, _, path1 = _simulate_cli(tmp_path, "quantum", 200_000, seed=99, name="a.json")
    t2, _, path2 = _simulate_cli(tmp_path, "quantum", 200_000, seed=99, name="b.json")
    bytes_ok = path1.read_bytes() == path2.read_bytes()

    cfg = SimulationConfig(
        model="quantum",
        theta_a0=CHSH_MAX_ANGLES[0], theta_a1=CHSH_MAX_ANGLES[1],
        theta_b0=CHSH_MAX_ANGLES[2], theta_b1=CHSH_MAX_ANGLES[3],
        trials=200_000, seed=99,
    )
    shard_ok = run_experiment(cfg, shards=4).tally == run_experiment(cfg, shards=1).tally
    api_cli_ok = run_experiment(cfg).tally == t1
    with capsys.disabled():
        _criterion(
            7, "determinism-and-shard-merge",
            bytes_ok and shard_ok and api_cli_ok,
            f"byte-identical={bytes_ok} shard-merge={shard_ok} api==cli={api_cli_ok}",
        )
