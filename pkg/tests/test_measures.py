import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import S2
from loccbound.ensembles import Ensemble, average_state, make_mixed, make_pure
from loccbound.errors import DistributionError, POVMError
from loccbound.linalg import SystemLayout, embed_operator, partial_trace
from loccbound.measures import (
    average_state_entropy,
    holevo_chi,
    mutual_information,
    outcome_joint,
    outcome_mutual_information,
    shannon_entropy,
    von_neumann_entropy,
)
from loccbound.randomized import random_density, random_ensemble, random_rank1_kraus
from loccbound.repro import build_e2, build_e3

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def h2(p):
    return -sum(x * math.log2(x) for x in (p, 1 - p) if x > 0)


class TestShannon:
    def test_fair_coin(self):
        assert shannon_entropy([0.5, 0.5]) == 1.0

    def test_certain(self):
        assert shannon_entropy([1, 0]) == 0.0

    def test_third(self):
        assert abs(shannon_entropy([1 / 3, 2 / 3]) - 0.918296) < 1e-6

    def test_clamps_tiny_negative(self):
        assert shannon_entropy([1 + 1e-13, -1e-13]) == 0.0

    def test_rejects_bad_sum(self):
        with pytest.raises(DistributionError):
            shannon_entropy([0.5, 0.4])

    def test_rejects_negative(self):
        with pytest.raises(DistributionError):
            shannon_entropy([1.1, -0.1])


class TestVonNeumann:
    def test_pure(self, gen):
        v = gen.normal(size=6) + 1j * gen.normal(size=6)
        v /= np.linalg.norm(v)
        assert abs(von_neumann_entropy(np.outer(v, v.conj()))) < 1e-9

    @pytest.mark.parametrize("d", [2, 3, 4, 8, 16])
    def test_maximally_mixed(self, d):
        assert abs(von_neumann_entropy(np.eye(d) / d) - math.log2(d)) < 1e-12

    def test_binary_entropy_point(self):
        a = 0.3
        p = (1 + a * a) / 3
        s = von_neumann_entropy(np.diag([p, (2 - a * a) / 3]))
        assert abs(s - 0.945) < 0.002
        assert abs(s - h2(p)) < 1e-12

    def test_basis_invariant(self, gen):
        q, _ = np.linalg.qr(gen.normal(size=(3, 3)) + 1j * gen.normal(size=(3, 3)))
        rho = np.diag([0.5, 0.3, 0.2])
        assert abs(von_neumann_entropy(q @ rho @ q.conj().T) - shannon_entropy([0.5, 0.3, 0.2])) < 1e-12

    @given(seeds, st.integers(min_value=2, max_value=9))
    def test_bounds(self, seed, d):
        g = np.random.default_rng(seed)
        rho = random_density(d, g, int(g.integers(1, d + 1)))
        s = von_neumann_entropy(rho)
        assert -1e-9 <= s <= math.log2(d) + 1e-9

    @given(seeds)
    def test_subadditive(self, seed):
        g = np.random.default_rng(seed)
        dims = (int(g.integers(2, 4)), int(g.integers(2, 4)))
        lay = SystemLayout(dims)
        rho = random_density(lay.total_dim, g, int(g.integers(1, lay.total_dim + 1)))
        s_ab = von_neumann_entropy(rho)
        s_a = von_neumann_entropy(partial_trace(rho, lay, [1]))
        s_b = von_neumann_entropy(partial_trace(rho, lay, [2]))
        assert s_ab <= s_a + s_b + 1e-9


class TestHolevo:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_orthogonal_basis(self, d):
        e = Ensemble.from_states([make_pure([d], np.eye(d)[i]) for i in range(d)])
        assert abs(holevo_chi(e) - math.log2(d)) < 1e-12

    def test_single_member(self):
        e = Ensemble.from_states([make_mixed([2], np.diag([0.3, 0.7]))])
        assert holevo_chi(e) == 0.0

    @pytest.mark.parametrize("a", [0.05, 0.3, S2, 0.9, 0.999])
    def test_e2_against_closed_form(self, a):
        a2 = a * a
        expected = -a2 * math.log2(a2 / 3) - (1 - a2) * math.log2((1 - a2) / 3)
        assert abs(holevo_chi(build_e2(a)) - expected) < 1e-9

    def test_orthogonal_members_give_shannon(self, gen):
        q, _ = np.linalg.qr(gen.normal(size=(6, 6)) + 1j * gen.normal(size=(6, 6)))
        probs = gen.dirichlet(np.ones(4))
        e = Ensemble.from_states([make_pure([2, 3], q[:, i]) for i in range(4)], list(probs))
        assert abs(holevo_chi(e) - shannon_entropy(probs)) < 1e-9

    def test_gram_route_matches_density_route(self, gen):
        for _ in range(20):
            e = random_ensemble([2, 3], gen, n_members=int(gen.integers(1, 6)), mixed_fraction=0.0)
            assert abs(average_state_entropy(e) - von_neumann_entropy(average_state(e))) < 1e-10

    def test_e3(self):
        assert abs(holevo_chi(build_e3()) - math.log2(9)) < 1e-9


def brute_force_mi(joint):
    total = 0.0
    px = [sum(row) for row in joint]
    py = [sum(col) for col in zip(*joint)]
    for x, row in enumerate(joint):
        for y, p in enumerate(row):
            if p > 0:
                total += p * math.log2(p / (px[x] * py[y]))
    return total


class TestOutcomeInformation:
    def test_trivial_measurement(self):
        e = Ensemble.from_states([make_pure([2], [1, 0]), make_pure([2], [0, 1])])
        assert outcome_mutual_information(e, [np.eye(2)]) == 0.0

    def test_perfect_discrimination(self):
        e = Ensemble.from_states([make_pure([2], [1, 0]), make_pure([2], [0, 1])])
        assert abs(outcome_mutual_information(e, [np.diag([1, 0]), np.diag([0, 1])]) - 1.0) < 1e-12

    def test_zero_plus_in_computational_basis(self):
        e = Ensemble.from_states([make_pure([2], [1, 0]), make_pure([2], [S2, S2])])
        # joint p(x, y) = [[1/2, 0], [1/4, 1/4]]
        expected = brute_force_mi([[0.5, 0.0], [0.25, 0.25]])
        assert abs(expected - 0.3112781244591328) < 1e-15
        assert abs(outcome_mutual_information(e, [np.diag([1, 0]), np.diag([0, 1])]) - expected) < 1e-12

    def test_incomplete_povm(self):
        e = Ensemble.from_states([make_pure([2], [1, 0])])
        with pytest.raises(POVMError):
            outcome_mutual_information(e, [np.diag([1, 0])])

    @given(seeds)
    def test_holevo_bound(self, seed):
        g = np.random.default_rng(seed)
        e = random_ensemble([2, int(g.integers(2, 4))], g)
        d = e.layout.total_dim
        ops = random_rank1_kraus(d, int(g.integers(d, d + 4)), g)
        assert outcome_mutual_information(e, ops) <= holevo_chi(e) + 1e-9

    def test_joint_matches_brute_force(self, gen):
        e = random_ensemble([2, 2], gen, n_members=3)
        ops = [embed_operator(k, e.layout, [1]) for k in random_rank1_kraus(2, 3, gen)]
        joint = outcome_joint(e, ops)
        assert abs(joint.sum() - 1) < 1e-12
        assert abs(mutual_information(joint) - brute_force_mi(joint.tolist())) < 1e-12
