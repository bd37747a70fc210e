"""Compare the formula variants against the Fock-space oracles.

Writes to OUTDIR (default results/adjudication):
  chirp_forms.csv     per-axis error of each chirp form against exp(...) matrices
  delta_divergence.csv  closed-form Q under both delta attributions vs the moment oracle
  variance_angle.csv  oracle variances vs the formula fed the squeeze or displacement phase
  round_trip_cutoff.csv  resynthesis error against cutoff for the worst |s| = 0.8 states
Usage: python scripts/adjudicate_variants.py [OUTDIR]
"""
import csv
import sys
from pathlib import Path

import numpy as np

from osc3d.checks import ROUND_TRIP_LABELS, squeeze_operator_factor
from osc3d.oscillator import position_amplitude
from osc3d.photon_statistics import mandel_q, mandel_q_oracle, quadrature_variances, statistics_oracle_variances
from osc3d.squeezed import H_FORMS, SqueezeLabel, squeezed_fock_coefficients, squeezed_position_amplitude


def write(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(header)
        out.writerows(rows)
    print(f"wrote {path}")


def chirp_forms():
    rows = []
    for r in (0.3, 0.6, 1.0):
        for theta in np.linspace(-np.pi, np.pi, 9):
            s = r * np.exp(1j * theta)
            for form in H_FORMS:
                coeffs = squeezed_fock_coefficients(SqueezeLabel([s, 0, 0], [0.5 - 0.5j, 0, 0]), 40, 120, h_form=form).factors[0]
                err = np.max(np.abs(coeffs - squeeze_operator_factor(s, 0.5 - 0.5j, 40)))
                rows.append((r, theta, form, err))
    return ("r", "theta", "h_form", "max_coeff_err"), rows


def delta_divergence():
    rows = []
    for r in np.linspace(0.1, 0.8, 4):
        for amp in (0.5, 1.0, 1.5):
            for theta in np.linspace(-np.pi, np.pi, 7):
                for phi in np.linspace(-np.pi, np.pi, 7):
                    label = SqueezeLabel([r * np.exp(1j * theta), 0, 0], [amp * np.exp(1j * phi), 0, 0])
                    oracle = mandel_q_oracle(squeezed_fock_coefficients(label, 60, 120))[0]
                    rows.append((r, amp, theta, phi, oracle, mandel_q(label, "squeeze_half")[0], mandel_q(label, "displacement_half")[0]))
    return ("r", "alpha_abs", "theta", "phi", "Q_oracle", "Q_theta_half_minus_phi", "Q_theta_minus_phi_half"), rows


def variance_angle():
    rows = []
    for theta in np.linspace(-np.pi, np.pi, 9):
        for phi in (-2.0, 0.4, 1.5):
            label = SqueezeLabel([0.6 * np.exp(1j * theta), 0, 0], [1.2 * np.exp(1j * phi), 0, 0])
            v1, v2 = statistics_oracle_variances(squeezed_fock_coefficients(label, 60, 120))[0]
            rows.append((theta, phi, v1, v2, *quadrature_variances(0.6, theta), *quadrature_variances(0.6, phi)))
    return ("theta", "phi", "var1_oracle", "var2_oracle", "var1_theta", "var2_theta", "var1_phi", "var2_phi"), rows


def round_trip_cutoff():
    r = np.random.default_rng(6).normal(size=(20, 3))
    rows = []
    for label in ROUND_TRIP_LABELS:
        for cutoff in (40, 50, 60, 70, 80):
            state = squeezed_fock_coefficients(label, cutoff, 200)
            err = np.max(np.abs(position_amplitude(state, r) - squeezed_position_amplitude(label, r)))
            rows.append((str(np.round(label.s, 3).tolist()), cutoff, err, state.tail_mass))
    return ("s", "cutoff", "max_abs_err", "tail_mass"), rows


if __name__ == "__main__":
    outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "results/adjudication")
    outdir.mkdir(parents=True, exist_ok=True)
    for name, build in [
        ("chirp_forms.csv", chirp_forms),
        ("delta_divergence.csv", delta_divergence),
        ("variance_angle.csv", variance_angle),
        ("round_trip_cutoff.csv", round_trip_cutoff),
    ]:
        write(outdir / name, *build())
