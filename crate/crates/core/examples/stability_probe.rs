use std::time::Instant;

use inflow_core::boundary_layer::{BlConfig, Branch, XiGridSpec};
use inflow_core::composition::{build_superposition, SuperpositionDesign};
use inflow_core::diagnostics::energy_functional;
use inflow_core::solver::{run, FarField, Field, Grid1D, SolverConfig};
use inflow_core::thermo::{GasModel, State};

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let amp = args.first().cloned().unwrap_or(1e-2);
    let theta_star = args.get(1).cloned().unwrap_or(0.6);
    let u_star = args.get(2).cloned().unwrap_or(0.5);
    let mu = args.get(3).cloned().unwrap_or(1.0);
    let kappa = args.get(4).cloned().unwrap_or(1.0);
    let ratio = args.get(5).cloned().unwrap_or(1.08);
    let eps = args.get(6).cloned().unwrap_or(1.0);
    let t_end = args.get(7).cloned().unwrap_or(100.0);

    let t0 = Instant::now();
    let g = GasModel::new(1.0, 5.0 / 3.0, None, mu, kappa).unwrap();
    let star = State::new(1.0, u_star, theta_star).unwrap();
    let design = SuperpositionDesign {
        star,
        theta_upper: star.theta + 1e-2,
        expansion_ratio: ratio,
        delta_b: 1e-2,
        branch: Branch::Plus,
        eps,
        q: 16,
        l_eta: 10.0,
        n_eta: 4001,
        bl_grid: XiGridSpec { n: 4001, xi_max: None },
        bl_config: BlConfig::default(),
    };
    let wave = build_superposition(&design, &g).unwrap();
    let dr = wave.rr.burgers.delta_r;
    println!(
        "mu={mu} kappa={kappa} ratio={ratio} eps={eps}: delta_r={dr:.3}, w+={:.3}, head xi(t=100)={:.0}",
        wave.rr.burgers.w_plus,
        wave.rr.burgers.head_x() + wave.rr.burgers.w_plus * 101.0 - wave.sigma_minus * 100.0
    );

    let grid = Grid1D::new(300.0, 3000).unwrap();
    let minus = wave.minus;
    let mut field = Field::from_wave(&wave, grid, 0.0);
    let (v00, u00, th00) = inflow_core::composition::evaluate_superposition(&wave, 0.0, 0.0);
    let (dv0, du0, dth0) = (minus.v - v00, minus.u - u00, minus.theta - th00);
    let taper = 4.0;
    for j in 0..grid.n {
        let xi = grid.node(j);
        if xi < taper {
            let chi = (std::f64::consts::FRAC_PI_2 * xi / taper).cos().powi(2);
            field.v[j] += dv0 * chi;
            field.u[j] += du0 * chi;
            field.theta[j] += dth0 * chi;
        }
        let s = (xi - 30.0) / 5.0;
        if s.abs() < 1.0 {
            let bump = amp * (std::f64::consts::FRAC_PI_2 * s).cos().powi(4);
            let mode = std::env::args().nth(9).unwrap_or_default();
            if mode == "u" {
                field.u[j] += bump;
            } else {
                field.v[j] += bump;
                field.u[j] += bump;
                field.theta[j] += bump;
            }
        }
    }
    let f0 = field.clone();
    let cfg = SolverConfig {
        cfl: 0.8,
        dt_max: 0.05,
        end_time: t_end,
        far_field: FarField::Extrapolation,
    };
    let samples: Vec<f64> = (1..=50).map(|k| t_end / 50.0 * k as f64).collect();
    let out = run(field, &wave, &g, &minus, &cfg, &samples).unwrap();
    let first = &out.norms.samples[0];
    let last = out.norms.samples.last().unwrap();
    println!(
        "sup0={:.3e} sup_end={:.3e} ratio={:.3}",
        first.sup,
        last.sup,
        last.sup / first.sup
    );
    let mut bad = 0;
    let mut prev = f64::INFINITY;
    let mut peak_t = 0.0;
    let mut peak = 0.0;
    for s in &out.norms.samples {
        if s.h1 * s.h1 > peak {
            peak = s.h1 * s.h1;
            peak_t = s.t;
        }
        if s.t >= 20.0 {
            if s.h1 * s.h1 > prev * (1.0 + 1e-12) {
                bad += 1;
            }
            prev = s.h1 * s.h1;
        }
    }
    println!("h1 increases after t=20: {bad}; h1^2 peak at t={peak_t}");
    let e0 = energy_functional(&f0, &wave, &g).unwrap();
    let e1 = energy_functional(&out.snapshots.last().unwrap().field, &wave, &g).unwrap();
    println!("I1(0)={:.3e} I1(end)={:.3e}", e0.i1_integral, e1.i1_integral);
    // Boundary decay fit over late samples.
    let mut ts = Vec::new();
    let mut bs = Vec::new();
    for s in &out.norms.samples {
        if s.t >= 10.0 && s.boundary > 1e-13 {
            ts.push(s.t);
            bs.push(s.boundary);
        }
    }
    if ts.len() >= 8 {
        let fit =
            inflow_core::diagnostics::decay_fit(&ts, &bs, inflow_core::diagnostics::DecayModel::Exponential)
                .unwrap();
        println!("boundary decay rate = {:.4} (residual {:.2e})", fit.value, fit.residual);
    }
    // Final perturbation locations.
    let p = &out.snapshots.last().unwrap().perturbation;
    let mut jmax = 0;
    let mut best = 0.0f64;
    for j in 0..grid.n {
        let m = p.phi[j].abs().max(p.psi[j].abs()).max(p.zeta[j].abs());
        if m > best {
            best = m;
            jmax = j;
        }
    }
    println!("argmax xi={:.0} |pert|={:.3e}", grid.node(jmax), best);
    println!("total {:?}", t0.elapsed());
}
