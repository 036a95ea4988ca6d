"""The `props` command: acceptance checks of the nulling results for K users."""

from __future__ import annotations

import dataclasses
import itertools
import math
import os

import logfire
import numpy as np

from polarzf import telemetry
from polarzf.backends.csvbackend import CsvBackend, ResultRecord
from polarzf.evaluation.dof import dof_count
from polarzf.evaluation.rates import estimate_muxg
from polarzf.exceptions import CertificateViolationError, InfeasibleNullingError
from polarzf.geometry import (
    Scenario,
    genericity_margin,
    link_geometry,
    random_generic_scenario,
    suggested_min_angle_sep,
)
from polarzf.polarization.channels import scenario_channel
from polarzf.polarization.dipoles import (
    COMPONENT_ORDER,
    FULL,
    IN_PLANE_FOUR,
    DipoleConfig,
)
from polarzf.zfdesign.assignment import (
    assign_for_scenario,
    assign_nulling,
    min_antennas,
)
from polarzf.zfdesign.design import ZFDesign, design_zf
from polarzf.zfdesign.effective import effective_channels, printed_dual_lambda
from polarzf.zfdesign.nullspace import nullspace_beamformer
from polarzf.zfdesign.placement import optimal_placement_design, placement_design


logger = telemetry.get_logger(__name__)

GAMMA_HAT_RTOL = 0.02
PLACEMENT_ATOL = 1e-12
LAMBDA_RTOL = 1e-10
GAMMA_RTOL = 1e-8
KEYHOLE_RTOL = 1e-8
COUNTING_K_MAX = 30
END_TO_END_K_MAX = 13
KEYHOLE_ANTENNAS = (1, 2, 3)

FOUR_DIPOLE_VARIANTS = ("ex ey ez mx", "mx my mz ex")
Z_AXIS_FOURTH = "ex ey ez mz"


@dataclasses.dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'ok' if self.passed else 'FAIL':<5}{self.name}: {self.detail}"


@dataclasses.dataclass
class PropsReport:
    K: int
    checks: list[Check] = dataclasses.field(default_factory=list)
    records: list[ResultRecord] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> Check:
        check = Check(name, bool(passed), detail)
        log = logger.info if check.passed else logger.warning
        log("%s", check.line())
        self.checks.append(check)
        return check


class ChecksFailedError(CertificateViolationError):
    """Some acceptance checks failed; `report` holds all of them."""

    def __init__(self, message: str, report: PropsReport):
        self.report = report
        super().__init__(message)


def muxg_close(gamma_hat: float, K: int) -> bool:
    return abs(gamma_hat - 2 * K) <= GAMMA_HAT_RTOL * 2 * K


def subset_indices(M: int) -> list[np.ndarray]:
    """Rows of the full 6M-dipole channel kept by each dipole subset, grouped by size.

    Array n has shape (number of n-dipole subsets, M n), antenna-major like
    the array channel.
    """
    width = len(COMPONENT_ORDER)
    groups = []
    for n in range(1, width + 1):
        rows = [
            [m * width + c for m in range(M) for c in combo]
            for combo in itertools.combinations(range(width), n)
        ]
        groups.append(np.array(rows))
    return groups


def third_singular_ratio(blocks: np.ndarray) -> float:
    """Largest s3/s1 over a stack of matrices (0 where rank 2 is trivially kept)."""
    s = np.linalg.svd(blocks, compute_uv=False)
    if s.shape[-1] < 3:
        return 0.0
    top = s[..., 0]
    ratios = np.divide(s[..., 2], top, out=np.zeros_like(top), where=top > 0)
    return float(ratios.max())



class PropsSuite:
    """Runs every check that applies to K users and collects a report."""

    def __init__(
        self,
        K: int,
        seed: int = 0,
        trials: int = 100,
        snr_pair: tuple[float, float] | None = None,
    ):
        if K < 1:
            msg = f"K must be positive, got {K}"
            raise ValueError(msg)
        self.K = K
        self.seed = seed
        self.trials = trials
        self.snr_pair = snr_pair
        self.report = PropsReport(K)

    def scenario(self, config: DipoleConfig = FULL, K: int | None = None, M: int = 1):
        K = K or self.K
        sep = suggested_min_angle_sep(K)
        return random_generic_scenario(K, M, self.seed, sep, components=config)

    def evaluate(self, design: ZFDesign, scheme: str = "fixed-zf") -> tuple[int, float]:
        """DOF and gamma-hat of a design, recorded as a result row."""
        dof = dof_count(design)
        muxg = estimate_muxg(design, snr_pair=self.snr_pair)
        self.report.records.append(ResultRecord.from_design(design, scheme, dof, muxg))
        return dof, muxg.gamma_hat

    def add_muxg(self, name: str, gamma_hat: float) -> Check:
        ok = muxg_close(gamma_hat, self.K)
        return self.report.add(f"{name} muxg", ok, f"gamma-hat {gamma_hat:.4f}")

    def run(self) -> PropsReport:
        K = self.K
        with logfire.span(
            "acceptance checks", users=K, seed=self.seed, trials=self.trials
        ):
            self.check_keyhole()
            self.check_counting_identity()
            if K == 1:
                self.check_single_user()
            if K in (2, 3):
                self.check_optimal_placement()
                self.check_four_dipoles()
            if K in (4, 5):
                self.check_dual_null()
            if K >= 6:
                self.check_min_antennas()
            self.check_collinear()
            self.check_electric_only()
        return self.report

    def check_keyhole(self):
        """Every link has rank <= 2 for any tx/rx dipole subset pair and array size."""
        worst = 0.0
        checked = 0
        for M in KEYHOLE_ANTENNAS:
            groups = subset_indices(M)
            for trial in range(self.trials):
                scenario = random_generic_scenario(2, M, self.seed + trial)
                for i, j in itertools.product(range(2), repeat=2):
                    full = scenario_channel(scenario, i, j).matrix
                    for rx_rows, tx_cols in itertools.product(groups, repeat=2):
                        # every (rx subset, tx subset) block of one shape at once
                        rows, cols = rx_rows[:, None, :, None], tx_cols[None, :, None, :]
                        blocks = full[rows, cols]
                        checked += len(rx_rows) * len(tx_cols)
                        worst = max(worst, third_singular_ratio(blocks))
        detail = (
            f"max s3/s1 {worst:.2e} over {checked} tx/rx subset channels, "
            f"{self.trials} placements, M in {KEYHOLE_ANTENNAS}"
        )
        self.report.add("keyhole rank", worst <= KEYHOLE_RTOL, detail)

    def check_counting_identity(self):
        mismatches = [
            k
            for k in range(1, COUNTING_K_MAX + 1)
            if min_antennas(k) != math.ceil((k + 1) / 6)
            or not assign_nulling(k, min_antennas(k)).complete
        ]
        detail = (
            f"min M = ceil((K+1)/6) for K <= {COUNTING_K_MAX}, mismatches {mismatches}"
        )
        self.report.add("antenna count", not mismatches, detail)

    def check_single_user(self):
        design = design_zf(self.scenario(), assign_nulling(1))
        dof, gamma_hat = self.evaluate(design)
        detail = f"dof {dof}, gamma-hat {gamma_hat:.4f}"
        self.report.add("single user", dof == 2 and muxg_close(gamma_hat, 1), detail)

    def check_optimal_placement(self):
        """Rotated (e, m) pairs null every cross link without beamforming."""
        K = self.K
        plan = optimal_placement_design(self.scenario(DipoleConfig.from_tokens("ex mx")))
        rotated = plan.scenario
        cross = max(
            float(np.max(np.abs(scenario_channel(rotated, i, j).matrix)))
            for i in range(K)
            for j in range(K)
            if i != j
        )
        detail = f"max |H_ij| {cross:.2e}"
        self.report.add("placement nulls", cross <= PLACEMENT_ATOL, detail)
        worst = 0.0
        for i, gain in enumerate(plan.gains):
            link = link_geometry(rotated, i, i)
            phase = link.a * np.exp(-1j * rotated.wavenumber * link.r)
            normalized = scenario_channel(rotated, i, i).matrix / phase
            expected = np.diag(plan.diagonals[i])
            error = float(np.max(np.abs(normalized - expected)))
            worst = max(worst, error / abs(gain))
        detail = f"rel. error {worst:.2e}"
        self.report.add("placement gains", worst <= PLACEMENT_ATOL, detail)
        dof, gamma_hat = self.evaluate(placement_design(plan), "optimal-placement")
        self.add_muxg("placement", gamma_hat)

    def check_four_dipoles(self):
        """Single-null closed forms on (e_x, e_y, m_x, m_y) and other four-dipole sets."""
        K = self.K
        scenario = self.scenario(IN_PLANE_FOUR)
        design = design_zf(scenario, assign_for_scenario(scenario), method="closed-form")
        # K=2 receivers null nothing, so only K=3 users have a closed-form gain
        mismatch = max(
            (e.closed_form.mismatch for e in effective_channels(design) if e.closed_form),
            default=0.0,
        )
        dof, gamma_hat = self.evaluate(design)
        detail = f"leakage {design.leakage_max:.2e}, lambda mismatch {mismatch:.2e}"
        ok = design.certified and mismatch <= LAMBDA_RTOL
        self.report.add("four dipoles", ok, detail)
        self.add_muxg("four dipoles", gamma_hat)
        for tokens in FOUR_DIPOLE_VARIANTS:
            variant = scenario.with_components(DipoleConfig.from_tokens(tokens))
            design = design_zf(variant, assign_for_scenario(variant))
            dof, gamma_hat = self.evaluate(design)
            detail = f"leakage {design.leakage_max:.2e}, dof {dof}"
            self.report.add(f"({tokens})", design.certified and dof == 2 * K, detail)
        failing = scenario.with_components(DipoleConfig.from_tokens(Z_AXIS_FOURTH))
        design = design_zf(failing, assign_for_scenario(failing))
        dof, gamma_hat = self.evaluate(design)
        detail = f"dof {dof} < {2 * K}, gamma-hat {gamma_hat:.4f}"
        self.report.add(f"({Z_AXIS_FOURTH}) falls short", dof < 2 * K, detail)

    def check_dual_null(self):
        """Dual-null closed forms on all six components."""
        K = self.K
        scenario = self.scenario(FULL)
        assignment = assign_nulling(K)
        design = design_zf(scenario, assignment, method="closed-form")
        dof, gamma_hat = self.evaluate(design)
        detail = f"leakage {design.leakage_max:.2e}"
        self.report.add("six dipoles", design.certified, detail)
        self.add_muxg("six dipoles", gamma_hat)
        dual_users = [
            i
            for i in range(K)
            if len(assignment.nulled_by_tx(i)) == len(assignment.nulled_by_rx(i)) == 2
        ]
        if not dual_users:
            return
        worst = 0.0
        for i in dual_users:
            targets, sources = assignment.nulled_by_tx(i), assignment.nulled_by_rx(i)
            Lambda, expected = printed_dual_lambda(scenario, targets, sources, i)
            error = np.max(np.abs(Lambda - expected * np.eye(2))) / abs(expected)
            worst = max(worst, float(error))
        detail = f"rel. error {worst:.2e} on users {dual_users}"
        self.report.add("gamma gains", worst <= GAMMA_RTOL, detail)

    def check_min_antennas(self):
        K = self.K
        M = min_antennas(K)
        self.report.add("antennas needed", M == math.ceil((K + 1) / 6), f"M = {M}")
        if K > END_TO_END_K_MAX:
            return
        scenario = self.scenario(FULL, M=M)
        design = design_zf(scenario, assign_nulling(K, M))
        dof, gamma_hat = self.evaluate(design)
        detail = f"M={M}: leakage {design.leakage_max:.2e}, gamma-hat {gamma_hat:.4f}"
        ok = design.certified and muxg_close(gamma_hat, K)
        self.report.add("multi-antenna design", ok, detail)

    def check_collinear(self):
        """A receiver on the ray of its own transmitter's nulled link loses its gain."""
        scenario = Scenario.build(
            [(0.0, 0.0), (5.0, 10.0)],
            [(10.0, 0.0), (20.0, 0.0)],
            tx_components=IN_PLANE_FOUR,
            seed=self.seed,
        )
        margin = genericity_margin(scenario)
        design = design_zf(scenario, assign_nulling(2, capacity=1), method="closed-form")
        dof, gamma_hat = self.evaluate(design)
        detail = (
            f"margin {margin}, zero-gain users {list(design.zero_gain_users)}, "
            f"gamma-hat {gamma_hat:.4f}"
        )
        saturated = gamma_hat < 4 - GAMMA_HAT_RTOL
        ok = margin == 0 and bool(design.zero_gain_users) and saturated
        self.report.add("collinear placement", ok, detail)

    def check_electric_only(self):
        """Three electric dipoles cannot null a single link and keep two streams."""
        scenario = self.scenario(DipoleConfig.from_tokens("ex ey ez"), K=2)
        assignment = assign_for_scenario(scenario)
        design = design_zf(scenario, assignment, allow_partial=True)
        try:
            nullspace_beamformer([scenario_channel(scenario, 0, 1)], 3)
        except InfeasibleNullingError:
            nulling_fails = True
        else:
            nulling_fails = False
        unassigned = len(assignment.unassigned)
        detail = f"{unassigned} links unassigned, single-link nulling fails"
        self.report.add("electric only", not design.certified and nulling_fails, detail)


def props(
    k: int,
    out: str | os.PathLike[str] | None = None,
    seed: int = 0,
    trials: int = 100,
    snr_pair: tuple[float, float] | None = None,
) -> PropsReport:
    """Run the acceptance checks for K users.

    Raises:
        ChecksFailedError: If any check fails
    """
    report = PropsSuite(k, seed=seed, trials=trials, snr_pair=snr_pair).run()
    if out is not None:
        CsvBackend(out).write_records(report.records)
    if not report.passed:
        names = ", ".join(c.name for c in report.failed)
        counts = f"{len(report.failed)} of {len(report.checks)}"
        msg = f"{counts} checks failed for K={k}: {names}"
        raise ChecksFailedError(msg, report)
    return report
