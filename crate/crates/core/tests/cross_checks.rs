// Cross-module geometry checks.

use num_complex::Complex64;
use oam_memory::decoherence::nodal_line_position;
use oam_memory::fieldgrid::GridSpec;
use oam_memory::holography::{diffract_gaussian, matched_input_grid, mode_content, output_waist, qutrit_hologram};
use oam_memory::modes::{synthesize, QuditState};

const LAMBDA: f64 = 795e-9;
const FOCAL: f64 = 0.5;
const W_IN: f64 = 1.05e-3;

// The π step of the qutrit mask and the dark line of |L⟩+|G⟩+|R⟩ sit at the same
// place in units of their own waists.
#[test]
fn qutrit_nodal_line_matches_hologram_boundary() {
    let g = matched_input_grid(256, W_IN, FOCAL, LAMBDA).unwrap();
    let holo = qutrit_hologram(1, W_IN, g).unwrap();
    let (row, _) = g.center_index();
    let phase = holo.phase();
    let step = (1..g.n)
        .find(|&c| phase[row * g.n + c] != phase[row * g.n + c - 1])
        .unwrap();
    let boundary = 0.5 * (g.x(step - 1) + g.x(step)) / W_IN;

    let w0 = output_waist(W_IN, FOCAL, LAMBDA);
    let one = Complex64::new(1.0, 0.0);
    let state = QuditState::qutrit(one, one, one, 1).unwrap();
    let grid = GridSpec::for_modes(256, w0, 1).unwrap();
    let field = synthesize(&state, w0, grid, LAMBDA).unwrap();
    let nodal = nodal_line_position(&field).unwrap() / w0;

    let tol = (g.pitch() / W_IN).max(grid.pitch() / w0);
    assert!((boundary - nodal).abs() < tol, "mask {boundary}, field {nodal}, tol {tol}");
    assert!((nodal + 0.5 / 2f64.sqrt()).abs() < grid.pitch() / w0);
}

// The lens multiplies charge ±l by (−i)^|l|, so the diffracted qutrit has L and R
// in quadrature with G and its intensity has no zero line.
#[test]
fn diffracted_qutrit_carries_lens_phase() {
    let g = matched_input_grid(256, W_IN, FOCAL, LAMBDA).unwrap();
    let out = diffract_gaussian(&qutrit_hologram(1, W_IN, g).unwrap(), W_IN, FOCAL, LAMBDA).unwrap();
    let c = mode_content(&out, output_waist(W_IN, FOCAL, LAMBDA), 1).unwrap();
    for k in [0, 2] {
        let rel = c.amplitudes[k] / c.amplitudes[1];
        assert!((rel.arg() + std::f64::consts::FRAC_PI_2).abs() < 1e-6, "arg {}", rel.arg());
    }
    assert!(nodal_line_position(&out).is_err());
}
