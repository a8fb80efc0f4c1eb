"""Matrix relaxation builder: constraint structure, options, invariances."""
import numpy as np
import pytest

import conerank as cr
from conerank.build import BuilderOptions
from conerank.problem import problem_to_text, tri_count
from helpers import full_mode_value, tau_matrix


def block_size(p, name="X"):
    return dict(p.blocks)[name]


class TestReducedStructure:
    def test_all_ones_2x2(self):
        p = cr.build_tau_plus_matrix(cr.NonnegMatrix(np.ones((2, 2))))
        assert block_size(p) == 4
        # one minor pair (i<k, j<l), all four entries present
        assert [r.name for r in p.equalities] == ["minor(1,1),(2,2)"]
        assert len(p.equalities[0].terms) == 2
        assert len(p.inequalities) == 4
        assert [c.name for c in p.psd_constraints] == ["border"]
        assert p.psd_constraints[0].size == 5

    def test_identity_2x2_zero_forcing(self):
        p = cr.build_tau_plus_matrix(cr.NonnegMatrix(np.eye(2)))
        assert block_size(p) == 2
        # the absent antidiagonal forces X between the two present entries to 0
        assert [r.name for r in p.equalities] == ["zero(1,1),(2,2)"]
        assert len(p.equalities[0].terms) == 1
        assert p.equalities[0].rhs == 0.0
        assert len(p.inequalities) == 2

    def test_anti_identity_zero_forcing(self):
        p = cr.build_tau_plus_matrix(cr.NonnegMatrix([[0.0, 1.0], [1.0, 0.0]]))
        assert [r.name for r in p.equalities] == ["zero(1,2),(2,1)"]

    def test_one_sided_zero(self):
        # support {11, 12, 22}: product over {12, 21} vanishes
        p = cr.build_tau_plus_matrix(cr.NonnegMatrix([[1.0, 1.0], [0.0, 1.0]]))
        assert [r.name for r in p.equalities] == ["zero(1,1),(2,2)"]

    def test_full_support_counts(self):
        # m*n diagonal rows and C(m,2)*C(n,2) minor equalities
        for m, n in [(2, 3), (3, 3), (3, 4)]:
            A = cr.NonnegMatrix(np.ones((m, n)))
            p = cr.build_tau_plus_matrix(A)
            assert block_size(p) == m * n
            assert len(p.inequalities) == m * n
            expect = (m * (m - 1) // 2) * (n * (n - 1) // 2)
            assert len(p.equalities) == expect
            assert all(r.name.startswith("minor") for r in p.equalities)

    def test_zero_matrix_raises(self):
        with pytest.raises(cr.ZeroInputError):
            cr.build_tau_plus_matrix(cr.NonnegMatrix(np.zeros((2, 2))))


class TestFullStructure:
    def test_x_covers_all_entries(self):
        A = cr.NonnegMatrix([[1.0, 1.0], [1.0, 0.0]])
        p = cr.build_tau_plus_matrix(A, BuilderOptions(use_reduced=False))
        assert block_size(p) == 4
        assert len(p.inequalities) == 4
        # minors are emitted unconditionally in full mode
        assert [r.name for r in p.equalities] == ["minor(1,1),(2,2)"]
        assert len(p.equalities[0].terms) == 2

    def test_agrees_with_reduced(self):
        rng = np.random.default_rng(21)
        for _ in range(3):
            vals = rng.uniform(0.1, 1.0, size=(3, 3))
            vals[rng.uniform(size=(3, 3)) < 0.3] = 0.0
            if not (vals > 0).any():
                continue
            A = cr.NonnegMatrix(vals)
            assert abs(tau_matrix(A) - full_mode_value(A)) <= 1e-6


class TestScaleInvariance:
    def test_problem_is_scale_free(self):
        # the builder normalizes by the largest entry, so c*A emits the
        # same coefficient data as A for any c > 0
        A = cr.NonnegMatrix([[0.3, 1.0], [0.7, 0.2]])
        B = cr.NonnegMatrix(7.0 * A.entries)
        assert problem_to_text(cr.build_tau_plus_matrix(A)) == \
            problem_to_text(cr.build_tau_plus_matrix(B))

    def test_value_matches_unnormalized_model(self):
        # solve an explicitly unscaled model and compare optima
        A = cr.NonnegMatrix([[2.0, 2.0], [2.0, 1.0]])
        from conerank.problem import ProblemBuilder
        supp = cr.support(A)
        N = len(supp)
        a = np.array([A[idx] for idx in supp])
        b = ProblemBuilder()
        b.add_scalar("t")
        b.add_block("X", N)
        b.set_objective([(0, 1.0)])
        for p in range(N):
            b.add_le(f"d{p}", [(b.column("X", p, p), 1.0)], a[p] ** 2)
        b.add_eq("m", [(b.column("X", 0, 3), 1.0), (b.column("X", 1, 2), -1.0)], 0.0)
        const = np.zeros((N + 1, N + 1))
        const[0, 1:] = const[1:, 0] = a
        terms = [(0, 0, 0, 1.0)]
        for p in range(N):
            for q in range(p, N):
                terms.append((b.column("X", p, q), 1 + p, 1 + q, 1.0))
        b.add_psd("border", N + 1, const, terms)
        manual = cr.extract_bound(cr.solve(b.build())).value
        assert abs(manual - tau_matrix(A)) <= 1e-6


class TestSupportOrder:
    def test_permutation_does_not_change_value(self):
        A = cr.NonnegMatrix([[1.0, 1.0], [1.0, 0.5]])
        base = tau_matrix(A)
        n = len(cr.support(A))
        rng = np.random.default_rng(5)
        for _ in range(3):
            order = list(rng.permutation(n))
            v = tau_matrix(A, support_order=order)
            assert abs(v - base) <= 1e-6

    def test_rejects_non_permutation(self):
        A = cr.NonnegMatrix([[1.0, 1.0], [1.0, 0.5]])
        with pytest.raises(cr.InputValidationError):
            cr.build_tau_plus_matrix(A, support_order=[0, 0, 1, 2])


class TestOptions:
    def test_diag_equality_same_value_here(self):
        A = cr.NonnegMatrix([[1.0, 1.0], [1.0, 0.5]])
        v = tau_matrix(A, BuilderOptions(diag_as_equality=True))
        assert abs(v - 4.0 / 3.0) <= 1e-5

    def test_entrywise_nonneg_rows_and_value(self):
        A = cr.NonnegMatrix([[1.0, 1.0], [1.0, 0.5]])
        opts = BuilderOptions(add_entrywise_nonneg=True)
        p = cr.build_tau_plus_matrix(A, opts)
        extra = [r for r in p.inequalities if r.name.startswith("nonneg")]
        assert len(extra) == tri_count(4)
        # adding valid rows cannot lower the optimum; on this instance it
        # does not move it either
        v = tau_matrix(A, opts)
        assert v >= 4.0 / 3.0 - 1e-6
        assert abs(v - 4.0 / 3.0) <= 1e-5

    def test_two_minus_t_strengthening(self):
        # the product row lifts this instance from 4/3 to 3/2
        A = cr.NonnegMatrix([[1.0, 1.0], [1.0, 0.5]])
        opts = BuilderOptions(add_two_minus_t=True)
        p = cr.build_tau_plus_matrix(A, opts)
        extra = [r for r in p.inequalities if r.name.startswith("twot")]
        assert len(extra) == tri_count(4)
        assert abs(tau_matrix(A, opts) - 1.5) <= 1e-5


class TestValues:
    def test_paper_anchor(self):
        assert abs(tau_matrix([[1.0, 1.0], [1.0, 0.5]]) - 4.0 / 3.0) <= 1e-5

    def test_single_entry(self):
        assert abs(tau_matrix([[5.0]]) - 1.0) <= 1e-6

    def test_identity_three(self):
        assert abs(tau_matrix(np.eye(3)) - 3.0) <= 1e-5

    def test_rank_one_is_one(self):
        rng = np.random.default_rng(9)
        u = rng.uniform(0.2, 1.0, size=4)
        v = rng.uniform(0.2, 1.0, size=3)
        assert abs(tau_matrix(np.outer(u, v)) - 1.0) <= 1e-5

    def test_never_exceeds_dimension(self):
        rng = np.random.default_rng(13)
        for _ in range(4):
            A = rng.uniform(0.05, 1.0, size=(3, 4))
            assert tau_matrix(A) <= 3.0 + 1e-4
