import math

import numpy as np
import pytest

from abcm import metrics
from abcm.graphs import generate_complete
from abcm.harness import (DEFAULT_TOLERANCE, GraphSpec, RunConfig, RunResult,
                          SweepConfig, execute_task, initial_opinions, mix_seed,
                          run_single, run_sweep, run_traced_dw, summarize,
                          sweep_opinions, sweep_plan)
from abcm.io import result_to_dict
from abcm.models import DW, HK, ModelParams, dw_step, init_state


def science_fields(r: RunResult) -> dict:
    d = result_to_dict(r)
    d.pop("wall_s")
    return d


def hk_cfg(gamma, delta, c0, **kw):
    return RunConfig(params=ModelParams(HK, gamma, delta, c0), **kw)


def dw_cfg(gamma, delta, c0, mu, **kw):
    return RunConfig(params=ModelParams(DW, gamma, delta, c0, mu), **kw)


class TestSeeds:
    def test_mix_deterministic_and_sensitive(self):
        assert mix_seed(1, 2, 3) == mix_seed(1, 2, 3)
        seen = {mix_seed(0, 3, k, m, gi) for k in range(4) for m in range(4)
                for gi in range(4)}
        assert len(seen) == 64

    def test_initial_opinions(self):
        a = initial_opinions(100, np.random.default_rng(3))
        b = initial_opinions(100, np.random.default_rng(3))
        assert np.array_equal(a, b)
        assert initial_opinions(1, np.random.default_rng(0)).shape == (1,)
        with pytest.raises(ValueError):
            initial_opinions(0, np.random.default_rng(0))

    def test_uniform_moments(self):
        draws = initial_opinions(10**5, np.random.default_rng(123))
        assert abs(draws.mean() - 0.5) < 0.005
        assert abs(draws.var() - 1.0 / 12.0) < 0.003


class TestRunSingle:
    def test_frozen_dynamics_converges_immediately(self, rng):
        g = generate_complete(20)
        x0 = rng.random(20)
        res = run_single(g, x0, hk_cfg(0.1, 0.5, 0.0))
        assert res.converged and res.T == 0
        # at n=20 every singleton exceeds 1% of the network, so all are major
        assert res.n_major == 20 and res.n_minor == 0
        assert res.entropy == pytest.approx(math.log(20), abs=1e-12)
        assert res.w_fraction == 0.0 and res.w_degenerate

    def test_hk_consensus_small_complete(self, rng):
        g = generate_complete(30)
        res = run_single(g, rng.random(30), hk_cfg(0.0, 1.0, 0.6))
        assert res.converged
        assert res.n_major == 1 and res.n_minor == 0
        assert res.entropy == 0.0
        assert res.w_fraction == 1.0

    def test_default_tolerances(self):
        assert hk_cfg(0, 1, 0.1).resolved_tolerance() == DEFAULT_TOLERANCE[HK] == 1e-6
        assert dw_cfg(0, 1, 0.1, 0.5).resolved_tolerance() == DEFAULT_TOLERANCE[DW] == 0.02

    def test_determinism(self, rng):
        g = generate_complete(25)
        x0 = rng.random(25)
        cfg = hk_cfg(0.05, 0.5, 0.1, seed=42)
        assert science_fields(run_single(g, x0, cfg)) == \
            science_fields(run_single(g, x0, cfg))

    def test_dw_determinism(self, rng):
        g = generate_complete(12)
        x0 = rng.random(12)
        cfg = dw_cfg(0.1, 0.5, 0.6, 0.5, seed=7)
        assert science_fields(run_single(g, x0, cfg)) == \
            science_fields(run_single(g, x0, cfg))

    def test_bailout_flagging_and_T_cap(self, rng):
        g = generate_complete(20)
        x0 = rng.random(20)
        # gamma=0 keeps interacting bounds at c0 while delta shrinks the rest;
        # 2 rounds is far too few to converge from random opinions
        res = run_single(g, x0, hk_cfg(0.0, 0.9, 0.05, bailout=2))
        assert res.bailed_out and not res.converged
        assert res.T == 2

    def test_bailout_indeterminable_policy(self, rng):
        g = generate_complete(20)
        x0 = rng.random(20)
        res = run_single(g, x0, hk_cfg(0.0, 1.0, 0.9, bailout=1,
                                       indeterminate_factor=10.0))
        if res.bailed_out:
            # one big cluster of random opinions: spread far above 10*tol
            assert not res.clusters_determinable
            assert res.entropy is None and res.w_fraction is None
            assert res.n_major is None
        res2 = run_single(g, x0, hk_cfg(0.0, 1.0, 0.9, bailout=1,
                                        indeterminate_factor=10**9))
        assert res2.clusters_determinable

    def test_run_to_convergence_ignores_bailout(self, rng):
        g = generate_complete(15)
        x0 = rng.random(15)
        res = run_single(g, x0, hk_cfg(0.1, 0.5, 0.4, bailout=1,
                                       run_to_convergence=True))
        assert res.converged and not res.bailed_out
        assert res.T > 1

    def test_check_interval_quantizes_T(self, rng):
        g = generate_complete(30)
        x0 = rng.random(30)
        r1 = run_single(g, x0, hk_cfg(0.0, 1.0, 0.5, check_interval=1))
        r7 = run_single(g, x0, hk_cfg(0.0, 1.0, 0.5, check_interval=7))
        assert r7.T % 7 == 0
        assert r1.T <= r7.T <= r1.T + 6

    def test_dw_matches_stepwise_protocol(self, rng):
        # windowed kernel runs must agree exactly with a stepwise replay of
        # the same seed, checked at the same interval boundaries
        g = generate_complete(8)
        x0 = rng.random(8)
        cfg = dw_cfg(0.2, 0.5, 0.4, 0.3, seed=99)
        res = run_single(g, x0, cfg)
        params = cfg.params
        tol = cfg.resolved_tolerance()
        interval = cfg.resolved_interval(g)
        gen = np.random.default_rng(99)
        s = init_state(g, params.c0, x0)
        t = 0
        conv = metrics.converged(s, g, tol)
        while not conv and t < cfg.bailout:
            window = min(interval, cfg.bailout - t)
            for _ in range(window):
                s, _ = dw_step(s, g, params, gen)
            t += window
            conv = metrics.converged(s, g, tol)
        assert conv == res.converged
        assert t == res.T

    def test_traced_dw_matches_untraced(self, rng):
        g = generate_complete(8)
        x0 = rng.random(8)
        cfg = dw_cfg(0.2, 0.5, 0.4, 0.3, seed=31)
        plain = run_single(g, x0, cfg)
        traced = run_traced_dw(g, x0, cfg, extra_selections=50)
        assert science_fields(traced.result) == science_fields(plain)

    def test_wrong_length_x0(self, rng):
        g = generate_complete(5)
        with pytest.raises(ValueError):
            run_single(g, rng.random(4), hk_cfg(0, 1, 0.1))


class TestSweep:
    def small_cfg(self, **kw):
        defaults = dict(model=HK, graph=GraphSpec(kind="complete", n=12),
                        gammas=(0.0, 0.1), deltas=(0.5, 1.0), c0s=(0.3,),
                        graphs_per_setting=1, opinions_per_graph=2, base_seed=5)
        defaults.update(kw)
        return SweepConfig(**defaults)

    def test_plan_product_counts(self):
        cfg = SweepConfig(model=HK, graph=GraphSpec(kind="er", n=10, p=0.5),
                          gammas=(0.1, 0.2), deltas=(0.1, 0.2, 0.3),
                          c0s=(0.1, 0.2, 0.3, 0.4),
                          graphs_per_setting=5, opinions_per_graph=10)
        assert len(sweep_plan(cfg)) == 1200

    def test_table_sized_hk_grid(self):
        # 8 gamma x 7 delta x 22 c0 x 10 opinion sets on one complete graph
        cfg = SweepConfig(model=HK, graph=GraphSpec(kind="complete", n=10),
                          gammas=tuple(np.linspace(0, 0.1, 8)),
                          deltas=tuple(np.linspace(0.01, 1, 7)),
                          c0s=tuple(np.linspace(0.02, 0.5, 22)),
                          graphs_per_setting=1, opinions_per_graph=10)
        assert len(sweep_plan(cfg)) == 8 * 7 * 22 * 10

    def test_opinion_reuse_across_grid(self):
        cfg = self.small_cfg()
        g = generate_complete(12)
        a = sweep_opinions(cfg, g, graph_id=0, trial=1)
        b = sweep_opinions(cfg, g, graph_id=0, trial=1)
        assert np.array_equal(a, b)
        c = sweep_opinions(cfg, g, graph_id=0, trial=0)
        assert not np.array_equal(a, c)

    def test_deterministic_rerun(self):
        cfg = self.small_cfg()
        first = [science_fields(r) for r in run_sweep(cfg)]
        second = [science_fields(r) for r in run_sweep(cfg)]
        assert first == second
        assert len(first) == len(sweep_plan(cfg))

    def test_skip_resumes(self):
        cfg = self.small_cfg()
        tasks = sweep_plan(cfg)
        done_keys = {tasks[0].key(), tasks[3].key()}
        rest = list(run_sweep(cfg, skip=done_keys))
        assert len(rest) == len(tasks) - 2

    def test_parallel_matches_serial(self):
        cfg = self.small_cfg()
        serial = [science_fields(r) for r in run_sweep(cfg, workers=1)]
        parallel = [science_fields(r) for r in run_sweep(cfg, workers=2)]
        assert serial == parallel

    def test_er_graphs_are_lcc_reduced(self):
        cfg = SweepConfig(model=HK, graph=GraphSpec(kind="er", n=40, p=0.05),
                          gammas=(0.0,), deltas=(1.0,), c0s=(0.3,),
                          graphs_per_setting=2, opinions_per_graph=1, base_seed=1)
        from abcm.harness import sweep_graph
        g, meta = sweep_graph(cfg, 0)
        assert meta["n"] == g.n <= meta["original_n"] == 40
        res = list(run_sweep(cfg))
        assert all(isinstance(r, RunResult) for r in res)


class TestSummarize:
    @staticmethod
    def result(gamma=0.1, delta=0.5, c0=0.1, mu=None, T=100, n_major=1, n_minor=0,
               entropy=0.0, w=1.0, determinable=True, bailed=False):
        return RunResult(model=HK, graph_kind="complete", graph_id=0, trial=0,
                         gamma=gamma, delta=delta, c0=c0, mu=mu, seed=0,
                         converged=not bailed, bailed_out=bailed,
                         clusters_determinable=determinable, T=T,
                         n_major=n_major if determinable else None,
                         n_minor=n_minor if determinable else None,
                         entropy=entropy if determinable else None,
                         w_fraction=w if determinable else None,
                         tolerance=1e-6, check_interval=1)

    def test_identical_results_zero_std(self):
        rows = summarize([self.result() for _ in range(10)])
        assert len(rows) == 1
        row = rows[0]
        assert row["n_runs"] == row["n_used"] == 10
        for metric in ("n_major", "n_minor", "entropy", "w_fraction", "log10_T"):
            assert row[f"{metric}_std"] == 0.0

    def test_log10_mean(self):
        rows = summarize([self.result(T=10), self.result(T=1000)])
        assert rows[0]["log10_T_mean"] == pytest.approx(2.0, abs=1e-12)

    def test_indeterminable_excluded(self):
        results = [self.result() for _ in range(7)]
        results += [self.result(determinable=False, bailed=True) for _ in range(3)]
        row = summarize(results)[0]
        assert row["n_runs"] == 10
        assert row["n_used"] == 7
        assert row["n_bailed_out"] == 3
        assert row["n_indeterminable"] == 3
        assert row["n_major_mean"] == 1.0

    def test_groups_sorted(self):
        results = [self.result(gamma=g) for g in (0.3, 0.1, 0.2)]
        rows = summarize(results)
        assert [r["gamma"] for r in rows] == [0.1, 0.2, 0.3]

    def test_empty_invalid(self):
        with pytest.raises(ValueError):
            summarize([])

    def test_t_zero_guard(self):
        row = summarize([self.result(T=0)])[0]
        assert row["log10_T_mean"] == 0.0
        assert math.isfinite(row["log10_T_mean"])


class TestExecuteTask:
    def test_pure_function_of_inputs(self):
        cfg = SweepConfig(model=DW, graph=GraphSpec(kind="complete", n=10),
                          gammas=(0.1,), deltas=(0.5,), c0s=(0.6,), mus=(0.5,),
                          graphs_per_setting=1, opinions_per_graph=1, base_seed=9)
        task = sweep_plan(cfg)[0]
        assert science_fields(execute_task(cfg, task)) == \
            science_fields(execute_task(cfg, task))
