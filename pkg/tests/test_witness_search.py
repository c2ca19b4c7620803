import itertools
import math

import numpy as np
import pytest

from qamlab import (
    BlockScenario,
    DiscreteMeasureSpace,
    ExpGenerator,
    GridSpec,
    PowerGenerator,
    Spacing,
    affine,
    block_scenario_residual,
    block_witness_search,
    commutation_residual,
    full_witness_search,
    refine_witness,
    scale,
)

LN2, LN3, LN4 = math.log(2.0), math.log(3.0), math.log(4.0)
ANCHOR_GRID = [0.0, LN2, LN3, LN4]
GEOMETRIC_21 = GridSpec(21, (0.1, 10.0), Spacing.GEOMETRIC)


class TestGridSpec:
    def test_points_linear_and_geometric(self):
        lin = GridSpec(5, (1.0, 3.0), Spacing.LINEAR).points()
        assert np.allclose(lin, np.linspace(1.0, 3.0, 5))
        geo = GridSpec(5, (1.0, 16.0), Spacing.GEOMETRIC).points()
        assert np.allclose(geo, [1.0, 2.0, 4.0, 8.0, 16.0])

    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(1, (0.1, 1.0))
        with pytest.raises(ValueError):
            GridSpec(5, (2.0, 1.0))
        with pytest.raises(ValueError):
            GridSpec(5, (-1.0, 1.0), Spacing.GEOMETRIC)

    def test_grid_must_fit_domains(self):
        # power generators live on (0, inf); a grid touching -1 is invalid
        with pytest.raises(ValueError):
            block_witness_search(
                PowerGenerator(1.0), PowerGenerator(2.0), 1, 1, 1, 1,
                GridSpec(5, (-1.0, 1.0), Spacing.LINEAR),
            )


class TestBlockSearch:
    def test_matches_exhaustive_oracle_on_anchor_grid(self):
        # independent oracle: plain nested loops over the 4^4 scenarios
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        best_rel, best_combo = -1.0, None
        for combo in itertools.product(ANCHOR_GRID, repeat=4):
            rel = block_scenario_residual(f, g, BlockScenario(1, 1, 1, 1, *combo)).rel_residual
            if rel > best_rel:
                best_rel, best_combo = rel, combo
        witness = block_witness_search(f, g, 1, 1, 1, 1, ANCHOR_GRID, threshold=1e-4)
        assert witness is not None
        assert witness.values == best_combo
        assert witness.report.rel_residual == pytest.approx(best_rel, rel=1e-12)
        assert witness.skipped_points == 0

    def test_anchor_grid_beats_known_scenario(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        witness = block_witness_search(f, g, 1, 1, 1, 1, ANCHOR_GRID, threshold=1e-4)
        known = block_scenario_residual(
            f, g, BlockScenario(1, 1, 1, 1, 0.0, LN2, LN3, LN4)
        )
        assert known.rel_residual >= 1.7e-3
        assert witness.report.rel_residual >= known.rel_residual
        assert witness.report.abs_residual >= 3.4e-3

    def test_geometric_grid_finds_violations(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        witness = block_witness_search(f, g, 1, 1, 1, 1, GEOMETRIC_21, threshold=1e-4)
        assert witness is not None
        assert witness.report.rel_residual >= 1e-4

    def test_proportional_pair_yields_nothing(self):
        g = ExpGenerator(2.0)
        assert block_witness_search(scale(g, 2.0), g, 1, 1, 1, 1, GEOMETRIC_21, 1e-6) is None

    def test_affine_pair_on_probability_masses_yields_nothing(self):
        g = PowerGenerator(2.0)
        f = affine(g, 2.0, 3.0)
        assert block_witness_search(f, g, 0.5, 0.5, 0.5, 0.5, GEOMETRIC_21, 1e-6) is None

    def test_soundness_reevaluation(self):
        # the reported residual must survive independent re-evaluation
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        witness = block_witness_search(f, g, 1.3, 0.7, 0.4, 2.1, GEOMETRIC_21, 1e-4)
        scenario = BlockScenario(1.3, 0.7, 0.4, 2.1, *witness.values)
        grid, h = scenario.to_grid_and_matrix()
        again = commutation_residual(f, g, grid, h)
        assert witness.report.rel_residual == pytest.approx(again.rel_residual, abs=1e-12)

    def test_completeness_for_non_proportional_pairs(self):
        pairs = [
            (ExpGenerator(1.0), ExpGenerator(2.0)),
            (PowerGenerator(1.0), PowerGenerator(2.0)),
            (ExpGenerator(1.0), PowerGenerator(1.0)),  # mixed domains, common (0, inf)
        ]
        for f, g in pairs:
            witness = block_witness_search(f, g, 1, 1, 1, 1, GEOMETRIC_21, threshold=1e-4)
            assert witness is not None, (f.describe(), g.describe())
            assert witness.report.rel_residual >= 1e-4

    def test_determinism_across_worker_counts(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        docs = {
            block_witness_search(f, g, 1, 1, 1, 1, GEOMETRIC_21, 1e-4, workers=w).to_json()
            for w in (1, 2, 3, 7)
        }
        assert len(docs) == 1

    def test_invalid_mass(self):
        with pytest.raises(ValueError):
            block_witness_search(
                ExpGenerator(1.0), ExpGenerator(2.0), 0.0, 1, 1, 1, GEOMETRIC_21
            )


class TestFullSearch:
    def two_by_two_unit(self):
        return (DiscreteMeasureSpace([1.0, 1.0]), DiscreteMeasureSpace([1.0, 1.0]))

    def test_two_by_two_equals_block_search(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        full = full_witness_search(f, g, (2, 2), self.two_by_two_unit(), GEOMETRIC_21, 1e-4)
        block = block_witness_search(f, g, 1, 1, 1, 1, GEOMETRIC_21, 1e-4)
        assert full is not None and block is not None
        flat = tuple(v for row in full.values for v in row)
        assert flat == block.values
        assert full.report.rel_residual == pytest.approx(block.report.rel_residual, rel=1e-12)

    def test_single_cell_on_probability_spaces_commutes(self):
        f, g = ExpGenerator(1.0), PowerGenerator(1.0)
        spaces = (DiscreteMeasureSpace([1.0]), DiscreteMeasureSpace([1.0]))
        assert full_witness_search(f, g, (1, 1), spaces, GEOMETRIC_21, 1e-6) is None

    def test_single_cell_off_unit_mass_can_witness(self):
        # with masses 2 and 3 the single-value sides differ by ln(2)*(1 - 3)
        f, g = ExpGenerator(1.0), PowerGenerator(1.0)
        spaces = (DiscreteMeasureSpace([2.0]), DiscreteMeasureSpace([3.0]))
        witness = full_witness_search(f, g, (1, 1), spaces, GEOMETRIC_21, 1e-6)
        assert witness is not None
        x = witness.values[0][0]
        lhs = math.log(2.0) + 3.0 * x
        rhs = 3.0 * (x + math.log(2.0))
        assert witness.report.abs_residual == pytest.approx(abs(lhs - rhs), rel=1e-10)

    def test_budget_guard_precedes_evaluation(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        spaces = (DiscreteMeasureSpace([1.0] * 3), DiscreteMeasureSpace([1.0] * 3))
        with pytest.raises(ValueError, match="budget"):
            full_witness_search(f, g, (3, 3), spaces, GridSpec(10, (0.5, 2.0)), 1e-4)

    def test_shape_space_mismatch(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        with pytest.raises(ValueError):
            full_witness_search(f, g, (2, 3), self.two_by_two_unit(), GEOMETRIC_21, 1e-4)

    def test_determinism_across_worker_counts(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        docs = {
            full_witness_search(
                f, g, (2, 2), self.two_by_two_unit(), GridSpec(9, (0.2, 5.0)), 1e-4, workers=w
            ).to_json()
            for w in (1, 4)
        }
        assert len(docs) == 1

    def test_soundness_reevaluation(self):
        from qamlab import ProductGrid, SimpleFunctionMatrix

        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        spaces = (DiscreteMeasureSpace([0.7, 1.4]), DiscreteMeasureSpace([2.0, 0.3]))
        witness = full_witness_search(f, g, (2, 2), spaces, GridSpec(9, (0.2, 5.0)), 1e-5)
        again = commutation_residual(
            f, g, ProductGrid(*spaces), SimpleFunctionMatrix(np.asarray(witness.values))
        )
        assert witness.report.rel_residual == pytest.approx(again.rel_residual, abs=1e-12)


class TestRefinement:
    def setup_method(self):
        self.f, self.g = ExpGenerator(1.0), ExpGenerator(2.0)
        self.start = block_witness_search(self.f, self.g, 1, 1, 1, 1, ANCHOR_GRID, 1e-4)

    def test_zero_iterations_returns_start(self):
        assert refine_witness(self.f, self.g, self.start, 0) is self.start

    def test_never_decreases(self):
        for iters in (1, 5, 20):
            refined = refine_witness(self.f, self.g, self.start, iters)
            assert refined.report.rel_residual >= self.start.report.rel_residual

    def test_fifty_iterations_strictly_improves(self):
        refined = refine_witness(self.f, self.g, self.start, 50)
        assert refined.report.rel_residual > self.start.report.rel_residual
        # regression anchor, recorded from the first verified run
        assert refined.report.rel_residual == pytest.approx(0.34657359027963863, rel=1e-6)

    def test_deterministic(self):
        a = refine_witness(self.f, self.g, self.start, 7)
        b = refine_witness(self.f, self.g, self.start, 7)
        assert a.values == b.values
        assert a.report == b.report

    def test_zero_residual_start_unchanged(self):
        g = ExpGenerator(2.0)
        f = scale(g, 2.0)
        sc = BlockScenario(1, 1, 1, 1, 0.5, 1.0, 1.5, 2.0)
        from qamlab import Witness

        fabricated = Witness("block", sc.masses, sc.block_values,
                             block_scenario_residual(f, g, sc))
        assert refine_witness(f, g, fabricated, 10) is fabricated

    def test_refines_matrix_witnesses(self):
        spaces = (DiscreteMeasureSpace([1.0, 1.0]), DiscreteMeasureSpace([1.0, 1.0]))
        start = full_witness_search(self.f, self.g, (2, 2), spaces, GridSpec(5, (0.5, 4.0)), 1e-5)
        refined = refine_witness(self.f, self.g, start, 10)
        assert refined.kind == "matrix"
        assert refined.report.rel_residual >= start.report.rel_residual


class TestWitnessJson:
    def test_block_document_fields(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        witness = block_witness_search(f, g, 1, 1, 1, 1, ANCHOR_GRID, 1e-4)
        doc = witness.to_json_dict()
        assert doc["kind"] == "block"
        assert doc["masses"] == [1, 1, 1, 1]
        assert len(doc["values"]) == 4
        assert doc["skipped_points"] == 0
        assert doc["rel_residual"] == witness.report.rel_residual
        assert set(doc) == {
            "kind", "masses", "values", "lhs", "rhs",
            "abs_residual", "rel_residual", "skipped_points",
        }

    def test_matrix_document_fields(self):
        f, g = ExpGenerator(1.0), ExpGenerator(2.0)
        spaces = (DiscreteMeasureSpace([1.0, 2.0]), DiscreteMeasureSpace([1.0, 1.0]))
        witness = full_witness_search(f, g, (2, 2), spaces, GridSpec(5, (0.5, 4.0)), 1e-5)
        doc = witness.to_json_dict()
        assert doc["kind"] == "matrix"
        assert doc["masses"] == [[1.0, 2.0], [1.0, 1.0]]
        assert len(doc["values"]) == 2 and len(doc["values"][0]) == 2
