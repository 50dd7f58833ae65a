"""Acceptance suite: one test per exit criterion, slow sweeps shared.

Run with `pytest tests/test_acceptance.py -v -s` to watch the per-criterion
pass/fail lines. The 1000-node sweeps take tens of minutes on one core.
"""

import math

import numpy as np
import pytest

from abcm.graphs import Graph, generate_complete, generate_er, largest_connected_component
from abcm.harness import (GraphSpec, RunConfig, SweepConfig, initial_opinions,
                          mix_seed, run_sweep, run_traced_dw, run_traced_hk,
                          sweep_plan)
from abcm.metrics import opinion_clusters, shannon_entropy, weighted_edge_fraction
from abcm.models import (DW, HK, ModelParams, baseline_dw_step, baseline_hk_step,
                         dw_step, hk_step, init_state)
from abcm.properties import (LimitClass, classify_confidence_limit,
                             cross_cluster_edge_check, effective_graph_fixation,
                             eventual_monotonicity_onset)

from oracles import (bfs_components, effective_pairs, entropy_of_sizes,
                     random_graph_pairs, w_fraction_direct)

pytestmark = pytest.mark.acceptance


def conclude(name: str, ok: bool, detail: str = "") -> None:
    print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"{name}: {detail}"


def run_all(cfg: SweepConfig) -> list:
    results = list(run_sweep(cfg))
    assert len(results) == len(sweep_plan(cfg))
    bad = [r for r in results if not hasattr(r, "T")]
    assert not bad, f"sweep failures: {bad}"
    return results


@pytest.fixture(scope="module")
def hk_main_sweep():
    """1000-node complete graph, gamma in {0.05, 0.1}, delta in {0.5, 1}."""
    cfg = SweepConfig(model=HK, graph=GraphSpec(kind="complete", n=1000),
                      gammas=(0.05, 0.1), deltas=(0.5, 1.0),
                      c0s=(0.05, 0.1, 0.2),
                      graphs_per_setting=1, opinions_per_graph=10,
                      base_seed=20240601)
    return run_all(cfg)


@pytest.fixture(scope="module")
def hk_highc0_sweep():
    """Reduced-grid points at c0 >= 0.3 on the 1000-node complete graph."""
    cfg = SweepConfig(model=HK, graph=GraphSpec(kind="complete", n=1000),
                      gammas=(0.0, 0.005, 0.05), deltas=(0.5, 1.0),
                      c0s=(0.3, 0.4, 0.5),
                      graphs_per_setting=1, opinions_per_graph=2,
                      base_seed=20240602)
    return run_all(cfg)


@pytest.fixture(scope="module")
def hk_slow_vs_baseline():
    """Paired sweeps (same opinion sets): gamma=0.01, delta=0.5 vs the baseline."""
    common = dict(model=HK, graph=GraphSpec(kind="complete", n=1000),
                  c0s=(0.05, 0.1, 0.2), graphs_per_setting=1,
                  opinions_per_graph=10, base_seed=20240603)
    adaptive = run_all(SweepConfig(gammas=(0.01,), deltas=(0.5,), **common))
    baseline = run_all(SweepConfig(gammas=(0.0,), deltas=(1.0,), **common))
    return adaptive, baseline


@pytest.fixture(scope="module")
def dw_consensus_sweep():
    cfg = SweepConfig(model=DW, graph=GraphSpec(kind="complete", n=100),
                      gammas=(0.1, 0.5), deltas=(0.5,), c0s=(0.5, 0.7, 0.9),
                      mus=(0.3, 0.5),
                      graphs_per_setting=1, opinions_per_graph=10,
                      base_seed=20240604)
    return run_all(cfg)


@pytest.fixture(scope="module")
def theorem_runs():
    """Desk-scale traced runs: 50-node instances extended past convergence."""
    hk_runs = []
    g50 = generate_complete(50)
    for trial in range(3):
        x0 = initial_opinions(50, np.random.default_rng(mix_seed(11, 2, 0, trial)))
        cfg = RunConfig(params=ModelParams(HK, 0.05, 0.5, 0.1), seed=trial)
        hk_runs.append((g50, run_traced_hk(g50, x0, cfg, extra_rounds=500)))
    ger, _ = largest_connected_component(
        generate_er(50, 0.5, np.random.default_rng(mix_seed(11, 1, 0))))
    for gamma in (0.01, 0.05, 0.1):
        for delta in (0.5, 0.7, 0.9):
            x0 = initial_opinions(ger.n, np.random.default_rng(mix_seed(11, 2, 1, 0)))
            cfg = RunConfig(params=ModelParams(HK, gamma, delta, 0.1), seed=7)
            hk_runs.append((ger, run_traced_hk(ger, x0, cfg, extra_rounds=500)))
    dw_runs = []
    for trial in range(3):
        x0 = initial_opinions(50, np.random.default_rng(mix_seed(12, 2, 0, trial)))
        cfg = RunConfig(params=ModelParams(DW, 0.3, 0.5, 0.3, mu=0.3), seed=50 + trial)
        dw_runs.append((g50, run_traced_dw(g50, x0, cfg)))
    return hk_runs, dw_runs


class TestBaselineReduction:
    def test_c01_baseline_reduction_exact(self):
        """Adaptive models at (0,1) equal the independent baselines bitwise."""
        rng = np.random.default_rng(1001)
        mismatches = 0
        for inst in range(50):
            g, _ = largest_connected_component(generate_er(50, 0.5, rng))
            x0 = rng.random(g.n)
            c0 = float(rng.uniform(0.05, 0.6))
            hk = ModelParams(HK, 0.0, 1.0, c0)
            sa = init_state(g, c0, x0)
            sb = init_state(g, c0, x0)
            for _ in range(200):
                sa = hk_step(sa, g, hk)
                sb = baseline_hk_step(sb, g, hk)
                if not (np.array_equal(sa.opinions, sb.opinions)
                        and np.array_equal(sa.confidence, sb.confidence)):
                    mismatches += 1
                    break
            dw = ModelParams(DW, 0.0, 1.0, c0, mu=float(rng.uniform(0.1, 0.5)))
            sa = init_state(g, c0, x0)
            sb = init_state(g, c0, x0)
            ra = np.random.default_rng(2000 + inst)
            rb = np.random.default_rng(2000 + inst)
            for _ in range(200):
                sa, rec_a = dw_step(sa, g, dw, ra)
                sb, rec_b = baseline_dw_step(sb, g, dw, rb)
                if not (rec_a == rec_b
                        and np.array_equal(sa.opinions, sb.opinions)
                        and np.array_equal(sa.confidence, sb.confidence)):
                    mismatches += 1
                    break
        conclude("baseline reduction (exact, 50 instances x 200 steps)",
                 mismatches == 0, f"mismatching instances: {mismatches}")


class TestMetricOracles:
    def test_c10_metric_oracles(self):
        """Production metrics match brute force on 1000 random instances."""
        rng = np.random.default_rng(77)
        worst = 0.0
        for _ in range(1000):
            n = int(rng.integers(2, 51))
            pairs = random_graph_pairs(rng, n, float(rng.uniform(0.05, 0.9)))
            g = Graph(n, [p[0] for p in pairs], [p[1] for p in pairs])
            x = rng.random(n)
            s = init_state(g, 0.5, x)
            s.confidence = rng.random(g.num_edges)
            prof = opinion_clusters(s, g)
            eff = effective_pairs(x, s.confidence, pairs)
            labels = bfs_components(n, [pairs[e] for e in eff])
            assert prof.assignment.tolist() == labels.tolist()
            h = shannon_entropy(prof, n)
            worst = max(worst, abs(h - entropy_of_sizes(prof.sizes.tolist(), n)))
            w, degenerate = weighted_edge_fraction(prof, n)
            if degenerate:
                assert w == 0.0
            else:
                ref = w_fraction_direct(prof.sizes.tolist(),
                                        prof.internal_edges_original.tolist(),
                                        prof.internal_edges_effective.tolist(), n)
                worst = max(worst, abs(w - ref))
        conclude("metric oracles (1000 instances, 1e-12)", worst <= 1e-12,
                 f"worst abs deviation {worst:.2e}")


class TestFuzzInvariants:
    def test_c11_fuzz_invariants(self):
        """1e6 random steps: ranges, DW pair-sum, DW locality."""
        rng = np.random.default_rng(31337)
        total = range_bad = pairsum_bad = locality_bad = 0
        worst_pairsum = 0.0
        hk_budget, dw_budget = 200_000, 800_000
        while total < hk_budget + dw_budget:
            n = int(rng.integers(3, 15))
            pairs = random_graph_pairs(rng, n, 0.6)
            if not pairs:
                continue
            g = Graph(n, [p[0] for p in pairs], [p[1] for p in pairs])
            c0 = float(rng.random())
            hk = ModelParams(HK, float(rng.random()), float(rng.random()), c0)
            dw = ModelParams(DW, float(rng.random()), float(rng.random()), c0,
                             mu=float(rng.uniform(0.01, 0.5)))
            s = init_state(g, c0, rng.random(n))
            gen = np.random.default_rng(int(rng.integers(1 << 62)))
            for _ in range(400):
                if total >= hk_budget:
                    break
                s = hk_step(s, g, hk)
                total += 1
                if not (0.0 <= s.opinions.min() and s.opinions.max() <= 1.0
                        and 0.0 <= s.confidence.min() and s.confidence.max() <= 1.0):
                    range_bad += 1
            for _ in range(4000):
                if total >= hk_budget + dw_budget:
                    break
                prev = s
                s, rec = dw_step(s, g, dw, gen)
                total += 1
                if not (0.0 <= s.opinions.min() and s.opinions.max() <= 1.0
                        and 0.0 <= s.confidence.min() and s.confidence.max() <= 1.0):
                    range_bad += 1
                i, j = g.edge_src[rec.edge], g.edge_dst[rec.edge]
                gap = abs((prev.opinions[i] + prev.opinions[j])
                          - (s.opinions[i] + s.opinions[j]))
                worst_pairsum = max(worst_pairsum, gap)
                if rec.interacted and gap > 1e-12:
                    pairsum_bad += 1
                changed_x = np.flatnonzero(s.opinions != prev.opinions)
                changed_c = np.flatnonzero(s.confidence != prev.confidence)
                if not (set(changed_x.tolist()) <= {i, j} and
                        set(changed_c.tolist()) <= {rec.edge}):
                    locality_bad += 1
        ok = range_bad == 0 and pairsum_bad == 0 and locality_bad == 0
        conclude("fuzz invariants (1e6 steps)", ok,
                 f"steps={total} range_bad={range_bad} pairsum_bad={pairsum_bad} "
                 f"locality_bad={locality_bad} worst_pairsum={worst_pairsum:.2e}")


class TestHkComplete:
    def test_c02_consensus_at_large_gamma(self, hk_main_sweep):
        """Every gamma >= 0.05 trial on K1000 reaches exactly one major cluster."""
        bad = [r for r in hk_main_sweep if r.n_major != 1]
        no_bailouts = all(not r.bailed_out for r in hk_main_sweep)
        conclude("HK consensus at gamma >= 0.05 (120 trials)",
                 len(bad) == 0 and no_bailouts,
                 f"non-consensus runs: {len(bad)} of {len(hk_main_sweep)}; "
                 f"bailout-free={no_bailouts}")

    def test_c03_consensus_at_large_c0(self, hk_highc0_sweep):
        """All runs with c0 in {0.3, 0.4, 0.5} reach consensus."""
        bad = [r for r in hk_highc0_sweep if r.n_major != 1 or not r.converged]
        conclude("HK consensus at c0 >= 0.3", len(bad) == 0,
                 f"non-consensus runs: {len(bad)} of {len(hk_highc0_sweep)}")

    def test_c04_w_equals_one_at_delta_one(self, hk_main_sweep, hk_highc0_sweep):
        """Converged runs with delta = 1 keep every within-cluster edge."""
        runs = [r for r in hk_main_sweep + hk_highc0_sweep
                if r.delta == 1.0 and r.converged]
        bad = [r for r in runs if r.w_fraction != 1.0]
        conclude("W(T) = 1 exactly when delta = 1",
                 len(runs) > 0 and len(bad) == 0,
                 f"{len(bad)} of {len(runs)} runs off 1.0")

    def test_c05_w_below_one_consensus_exists(self, hk_main_sweep):
        """Some consensus runs at gamma=0.05, delta=0.5 lose within-cluster edges."""
        detail = []
        ok = True
        for c0 in (0.05, 0.1, 0.2):
            runs = [r for r in hk_main_sweep
                    if r.gamma == 0.05 and r.delta == 0.5 and r.c0 == c0
                    and r.converged and r.n_major == 1]
            below = [r for r in runs if r.w_fraction is not None and r.w_fraction < 1.0]
            detail.append(f"c0={c0}: {len(below)}/{len(runs)} with W<1")
            ok = ok and len(below) >= 1
        conclude("W(T) < 1 consensus exists at delta = 0.5", ok, "; ".join(detail))

    def test_c06_adaptive_slower_than_baseline(self, hk_slow_vs_baseline):
        """Mean log10 T at (0.01, 0.5) strictly exceeds the baseline's per c0."""
        adaptive, baseline = hk_slow_vs_baseline
        detail = []
        ok = True
        for c0 in (0.05, 0.1, 0.2):
            la = [math.log10(max(r.T, 1)) for r in adaptive if r.c0 == c0]
            lb = [math.log10(max(r.T, 1)) for r in baseline if r.c0 == c0]
            gap = np.mean(la) - np.mean(lb)
            detail.append(f"c0={c0}: gap={gap:+.2f} decades")
            ok = ok and np.mean(la) > np.mean(lb)
        no_bailouts = all(not r.bailed_out for r in adaptive + baseline)
        conclude("adaptive HK slower than baseline", ok and no_bailouts,
                 "; ".join(detail))


class TestDwComplete:
    def test_c07_dw_consensus_at_large_c0(self, dw_consensus_sweep):
        """All K100 trials at c0 in {0.5, 0.7, 0.9} reach one major cluster."""
        bad = [r for r in dw_consensus_sweep if r.n_major != 1 or not r.converged]
        conclude("DW consensus at c0 >= 0.5 (120 trials)", len(bad) == 0,
                 f"non-consensus runs: {len(bad)} of {len(dw_consensus_sweep)}")

    def test_c08_dw_bailout_realism(self):
        """c0=0.1, mu=0.1, (0.3, 0.5) on K100 hits the 1e6-step bailout often."""
        cfg = SweepConfig(model=DW, graph=GraphSpec(kind="complete", n=100),
                          gammas=(0.3,), deltas=(0.5,), c0s=(0.1,), mus=(0.1,),
                          graphs_per_setting=1, opinions_per_graph=10,
                          base_seed=20240605)
        results = run_all(cfg)
        bailed = sum(r.bailed_out for r in results)
        conclude("DW bailout realism (expect >= 5 of 10)", bailed >= 5,
                 f"bailouts: {bailed}/10")


class TestTheoremSuite:
    def test_c09_theorem_suite(self, theorem_runs):
        """Finite-horizon checks of the limit statements on 50-node instances."""
        hk_runs, dw_runs = theorem_runs
        n_traces = undet = no_onset = 0
        fix_missing = cross_bad = 0
        for g, tr in hk_runs:
            for c in tr.traces:
                n_traces += 1
                if classify_confidence_limit(c, 1e-3) is LimitClass.UNDETERMINED:
                    undet += 1
                if eventual_monotonicity_onset(c, strict=True) is None:
                    no_onset += 1
            if effective_graph_fixation(tr.history) is None:
                fix_missing += 1
            if not cross_cluster_edge_check(tr.history, tr.final_profile, g):
                cross_bad += 1
        dw_total = dw_weak = 0
        for g, tr in dw_runs:
            for c in tr.traces:
                dw_total += 1
                if eventual_monotonicity_onset(c, strict=False) is not None:
                    dw_weak += 1
            if not cross_cluster_edge_check(tr.history, tr.final_profile, g):
                cross_bad += 1
        weak_frac = dw_weak / dw_total
        ok = (undet == 0 and no_onset == 0 and fix_missing == 0
              and cross_bad == 0 and weak_frac >= 0.99)
        conclude("theorem suite (limits, onsets, fixation, cross-cluster)", ok,
                 f"hk_traces={n_traces} undetermined={undet} no_onset={no_onset} "
                 f"fixation_missing={fix_missing} cross_bad={cross_bad} "
                 f"dw_weak_monotone={weak_frac:.4f}")
