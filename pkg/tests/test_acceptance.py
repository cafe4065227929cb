"""Acceptance gate: eleven criteria, one printed verdict line each.

Run `pytest tests/test_acceptance.py -v -s` to see the verdict lines.  Every
assertion states the documented target exactly and is never weakened to fit
the code.  Criterion 02 is expected to stay red: its target asks the banded
even-number family to shatter some 3-point set inside {1..60}, but the
family's VC dimension is 2 on every window.  Sketch: members hold at most
one odd point, so a shattered set has at most one odd; for three evens, the
all-ones pattern forces one block and a lone-one pattern then needs a member
omitting two block elements, but members omit at most one; for two evens u,v
in block k plus an odd marker, the marker's unique owner must contain u and
v (all-ones pattern) and also omit them (marker-only pattern), forcing its
block index to equal k and differ from k at once.  The test reports the
measured value and fails honestly rather than bending the claim.
"""

import itertools
import json
import math
import time
from fractions import Fraction

from cpaclab import (Distribution, ExperimentConfig, Hypothesis, Sample,
                     SplitMix64, WitnessFn, all_ones_witness,
                     all_ones_witness_program, all_zeros_witness_program,
                     baseline_class, block, block_class,
                     block_class_membership, diagonal_members,
                     diagonalization_demo, empirical_distribution,
                     empirical_loss, enumerate_samples, erm_bounded, erm_good,
                     full_class, asymptotic_erm_block, good_class, ldim_window,
                     lift_to_asymptotic_erm, erm_learner, odd_marked_hypothesis,
                     pac_success_rate, punctured_hypothesis, restrict,
                     scpac_obstruction_demo, surrogate, true_loss, union_class,
                     uniform_convergence_rate, vc_dimension_window,
                     verify_witness, witness_from_program)
from cpaclab.cli import run as cli_run
from cpaclab.machines import Program

INC = surrogate("inc")


def verdict(num, ok, detail, elapsed, limit):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} "
          f"{detail} ({elapsed:.2f}s, limit {limit:.0f}s)")
    assert elapsed < limit, f"criterion {num} exceeded its {limit}s budget"
    assert ok, detail


def rand_sample(rng, max_point, max_len, min_len=1):
    size = min_len + rng.next_u64() % (max_len - min_len + 1)
    return Sample.from_pairs([
        (rng.next_u64() % (max_point + 1), rng.next_u64() % 2)
        for _ in range(size)])


def oracle_argmin(supports, sample):
    best = None
    for support in sorted(supports, key=lambda s: (len(s), tuple(s))):
        h = Hypothesis(tuple(support))
        loss = empirical_loss(h, sample)
        if best is None or loss < best[1]:
            best = (h, loss)
    return best


def test_criterion_01_exact_loss_identity():
    """1000 random (h, S): sample loss equals true loss under D(S), exactly."""
    t0 = time.monotonic()
    rng = SplitMix64(101)
    ok = True
    for _ in range(1000):
        support = sorted({rng.next_u64() % 13
                          for _ in range(rng.next_u64() % 7)})
        h = Hypothesis(tuple(support))
        s = rand_sample(rng, 12, 30)
        if empirical_loss(h, s) != true_loss(h, empirical_distribution(s)):
            ok = False
            break
    verdict(1, ok, "1000 exact loss identities", time.monotonic() - t0, 5)


def test_criterion_02_block_geometry():
    """Closed-form blocks match the iterative partition; the window {1..60}
    is then asked for a shattered 3-set and no 4-set."""
    t0 = time.monotonic()
    nxt, agree = 2, True
    for k in range(1, 101):
        want = tuple(nxt + 2 * i for i in range(k))
        nxt += 2 * k
        if block(k).elements != want:
            agree = False
    members = block_class(INC).enumerate(60)
    view = restrict(members, range(1, 61))
    vc = vc_dimension_window(view)
    found3, no4 = vc >= 3, vc <= 3
    verdict(2, agree and found3 and no4,
            f"blocks agree over I_1..I_100; window vc={vc} "
            f"(target: a shattered 3-set exists and no 4-set does)",
            time.monotonic() - t0, 30)


def test_criterion_03_augmented_class_respects_witness():
    """For k in {0,1,2}: no member of the augmented class realizes the
    all-ones pattern on k+1 points extended by a further 1."""
    t0 = time.monotonic()
    rng = SplitMix64(303)
    ok = True
    for k in (0, 1, 2):
        w = all_ones_witness(k)
        augmented = union_class(
            f"aug{k}", baseline_class(k + 1), good_class(w, k))
        members = augmented.enumerate(12)
        extended = WitnessFn(k + 1, lambda pts, w=w: w(pts[:-1]) + (1,),
                             name=f"extended-{k}")
        tuples = []
        while len(tuples) < 500:
            pts = sorted({rng.next_u64() % 41 for _ in range(k + 2)})
            if len(pts) == k + 2:
                tuples.append(tuple(pts))
        if not verify_witness(extended, members, tuples):
            ok = False
    verdict(3, ok, "3x500 extended-pattern tuples excluded on |support|<=12 members",
            time.monotonic() - t0, 60)


def test_criterion_04_erm_oracle_equivalence():
    """erm_bounded and erm_good match exhaustive canonical argmins: exact
    losses and identical tie-breaks on 200 random samples each."""
    t0 = time.monotonic()
    rng = SplitMix64(404)
    ok = True
    learner = erm_learner(full_class())
    for _ in range(200):
        sample = rand_sample(rng, 12, 12)
        top = max(e.point for e in sample)
        pool = [c for size in range(top + 2)
                for c in itertools.combinations(range(top + 1), size)]
        want_h, want_loss = oracle_argmin(pool, sample)
        got = learner(sample)
        if got != want_h or empirical_loss(got, sample) != want_loss:
            ok = False
            break
    for i in range(200):
        k = i % 3
        sample = rand_sample(rng, 12, 12)
        top = max(e.point for e in sample)
        pool = [c for size in range(min(k + 1, top + 1) + 1)
                for c in itertools.combinations(range(top + 1), size)]
        want_h, want_loss = oracle_argmin(pool, sample)
        got = erm_good(sample, all_ones_witness(k), k)
        if got != want_h or empirical_loss(got, sample) != want_loss:
            ok = False
            break
    verdict(4, ok, "200+200 samples: losses and tie-breaks identical",
            time.monotonic() - t0, 60)


def test_criterion_05_asymptotic_erm_contract():
    """Block ERM with f(a)=a+1: suboptimality <= 1/(m+2) exactly, outputs
    are members; 200 random samples, m <= 20, points <= 40."""
    t0 = time.monotonic()
    rng = SplitMix64(505)
    ok = True
    for _ in range(200):
        sample = rand_sample(rng, 40, 20)
        m = len(sample)
        report = asymptotic_erm_block(sample, INC)
        if block_class_membership(report.output, INC) is not True:
            ok = False
            break
        top = max(e.point for e in sample)
        pool = {punctured_hypothesis(1, 1)}
        k = 1
        while k * k - k + 2 <= top:
            pool.update(punctured_hypothesis(k, j) for j in range(1, k + 1))
            k += 1
        pool.update(odd_marked_hypothesis(a, INC)
                    for a in range(1, max((top - 1) // 2, 0) + 1))
        best = min(empirical_loss(h, sample) for h in pool)
        if report.epsilon != Fraction(1, m + 2) or \
                report.achieved_loss > best + Fraction(1, m + 2):
            ok = False
            break
    verdict(5, ok, "200 samples: loss <= minimum + 1/(m+2), members only",
            time.monotonic() - t0, 60)


def test_criterion_06_lift_enumeration():
    """Lift: rerun-set size is (#distinct)^|S| and the lifted loss equals the
    exact minimum over reruns; with an ERM inner learner it equals the class
    minimum; 100 random samples, |S| <= 4 over <= 4 distinct points."""
    t0 = time.monotonic()
    rng = SplitMix64(606)
    inner = erm_learner(full_class())
    ok = True
    for _ in range(100):
        size = 1 + rng.next_u64() % 4
        universe = [rng.next_u64() % 9 for _ in range(4)]
        points = [universe[rng.next_u64() % 4] for _ in range(size)]
        target = {x for x in set(points) if rng.next_u64() % 2}
        sample = Sample.from_pairs([(x, 1 if x in target else 0) for x in points])
        distinct = len({e.point for e in sample})
        reruns = list(enumerate_samples(empirical_distribution(sample), len(sample)))
        lifted = lift_to_asymptotic_erm(inner, sample)
        lifted_loss = empirical_loss(lifted, sample)
        rerun_min = min(empirical_loss(inner(s2), sample) for s2 in reruns)
        class_min = empirical_loss(inner(sample), sample)
        if len(reruns) != distinct ** len(sample) or \
                lifted_loss != rerun_min or lifted_loss != class_min:
            ok = False
            break
    verdict(6, ok, "100 samples: |reruns| = d^m and lifted loss is the exact minimum",
            time.monotonic() - t0, 30)


def test_criterion_07_diagonalization_demo():
    """Both constant witness programs at k in {0,1}, budget 10^5: the demo's
    member is in the family, matches the machine's output on its block, and
    refutes the coded witness."""
    t0 = time.monotonic()
    from cpaclab import diagonal_membership
    ok = True
    for k in (0, 1):
        for maker, bits in ((all_ones_witness_program, 1),
                            (all_zeros_witness_program, 0)):
            program = maker(k)
            demo = diagonalization_demo(program, k, 10 ** 5)
            w = witness_from_program(program, k, 10 ** 5)
            if not diagonal_membership(demo.hypothesis):
                ok = False
            if tuple(demo.hypothesis(x) for x in demo.points) != demo.output:
                ok = False
            if demo.output != (bits,) * (k + 1):
                ok = False
            if verify_witness(w, [demo.hypothesis], [demo.points]):
                ok = False  # the witness must be refuted
    verdict(7, ok, "4 demos: members verified, witnesses refuted",
            time.monotonic() - t0, 60)


def test_criterion_08_disjoint_supports_ldim_one():
    """Diagonal members for e <= 200 (budget 10^4): pairwise disjoint
    supports; the window restriction to their union has ldim 1."""
    t0 = time.monotonic()
    members = diagonal_members(200, 10 ** 4)
    enough = len(members) >= 2
    disjoint = all(not (set(a.support) & set(b.support))
                   for a, b in itertools.combinations(members, 2))
    window = sorted({x for h in members for x in h.support})
    ldim = ldim_window(restrict(members, window))
    verdict(8, enough and disjoint and ldim == 1,
            f"{len(members)} members, disjoint supports, window ldim={ldim}",
            time.monotonic() - t0, 60)


def test_criterion_09_obstruction_equivalence():
    """Zero-loss flag equals range membership for k <= 20 under all three
    built-in surrogates."""
    t0 = time.monotonic()
    ok = all(scpac_obstruction_demo(k, surrogate(name)) ==
             surrogate(name).range_contains(k)
             for name in ("inc", "prime", "double") for k in range(1, 21))
    verdict(9, ok, "3 surrogates x k<=20 equivalences",
            time.monotonic() - t0, 30)


def test_criterion_10_pac_and_uc_statistics():
    """Realizable distribution over {0..7}, singleton class, ERM, n=3:
    success rates clear 1 - 1/3 - 3 sigma at m=64 (2000 trials); uniform
    convergence does the same at m=200.  Both deterministic given the seed."""
    t0 = time.monotonic()
    dist = Distribution.uniform([(x, 1 if x == 3 else 0) for x in range(8)])
    pac_cfg = ExperimentConfig(
        kind="pac", class_spec={"name": "baseline", "d": 1},
        learner_spec={"name": "erm"}, distribution=dist,
        m_grid=(64,), trials=2000, seed=20260819, n=3)
    pac = pac_success_rate(pac_cfg)
    uc_cfg = ExperimentConfig(
        kind="uniform-convergence", class_spec={"name": "baseline", "d": 1},
        learner_spec={"name": "erm"}, distribution=dist,
        m_grid=(200,), trials=2000, seed=20260819, n=3)
    uc = uniform_convergence_rate(uc_cfg)
    p = 1 - 1 / 3
    sigma = math.sqrt(p * (1 - p) / 2000)
    bar = p - 3 * sigma
    pac_rate = pac.rows[0].successes / 2000
    uc_rate = uc.rows[0].successes / 2000
    replay = pac_success_rate(pac_cfg).rows[0].successes == pac.rows[0].successes
    verdict(10, pac_rate >= bar and uc_rate >= bar and replay,
            f"pac rate {pac_rate:.4f}, uc rate {uc_rate:.4f}, bar {bar:.4f}, "
            f"replay stable", time.monotonic() - t0, 120)


def test_criterion_11_cli_replay_byte_identical(tmp_path, capsys):
    """The experiment command, run twice with one config, emits byte-equal
    JSON and CSV."""
    t0 = time.monotonic()
    config = {
        "kind": "pac",
        "class": {"name": "baseline", "d": 1},
        "learner": {"name": "erm"},
        "distribution": [[x, 1 if x == 3 else 0, "1/8"] for x in range(8)],
        "m_grid": [0, 8, 32],
        "trials": 100,
        "seed": 23,
        "n": 3,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    for name in ("a", "b"):
        code = cli_run(["experiment", "run", str(path),
                        "--out-dir", str(tmp_path / name), "--no-figures"])
        assert code == 0
    capsys.readouterr()
    same_json = (tmp_path / "a" / "result.json").read_bytes() == \
        (tmp_path / "b" / "result.json").read_bytes()
    same_csv = (tmp_path / "a" / "result.csv").read_bytes() == \
        (tmp_path / "b" / "result.csv").read_bytes()
    verdict(11, same_json and same_csv, "JSON and CSV byte-identical",
            time.monotonic() - t0, 30)
