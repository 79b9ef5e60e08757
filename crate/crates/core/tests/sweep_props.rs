use qhe_core::atoms::{chi_bounds, epsilon_e_bounds};
use qhe_core::steady_state::{classify_regime, denominator};
use qhe_core::sweep::{
    evaluate_point, grid, run_sweep, Axis, Case, FigurePreset, Observable, Param, SweepSpec,
    Validity,
};
use qhe_core::{MeanPhotonNumber, RegimeLabel};

fn check_records(spec: &SweepSpec) {
    let recs = run_sweep(spec).unwrap();
    assert_eq!(recs.len(), grid(spec).unwrap().len());
    for r in &recs {
        let i = r.inputs;
        let nb = MeanPhotonNumber::new(i.nbar).unwrap();
        let has_values = r.observables.nbar_q.is_some()
            || r.observables.t_ratio.is_some()
            || r.observables.eta_q.is_some();
        assert_eq!(has_values, r.validity == Validity::Valid, "{r:?}");
        if let Some(regime) = r.observables.regime {
            assert_eq!(regime, classify_regime(i.eps_g, i.eps_e, nb));
        }
        let d = denominator(i.eps_g, i.eps_e, i.nbar);
        match spec.case {
            Case::MultiGround if i.n_levels.unwrap() >= 2 => {
                let b = chi_bounds(i.n_levels.unwrap(), nb).unwrap();
                if r.validity == Validity::Valid {
                    assert!(b.contains(i.chi.unwrap()), "{r:?}");
                }
            }
            Case::TwoExcited => {
                let b = epsilon_e_bounds(nb);
                if r.validity == Validity::Valid && i.eps_e != 0.0 {
                    assert!(b.contains(i.eps_e), "{r:?}");
                }
            }
            _ => {}
        }
        match r.validity {
            Validity::Valid => assert!(d > 0.0),
            Validity::Unphysical => assert!(d <= 0.0 || i.eps_e == -1.0),
            Validity::Zero => assert_eq!(i.eps_e, -1.0),
            _ => {}
        }
    }
}

#[test]
fn preset_records_agree_with_library_bounds() {
    for p in FigurePreset::ALL {
        for spec in p.specs() {
            check_records(&spec);
        }
    }
}

#[test]
fn evaluation_order_does_not_matter() {
    let spec = FigurePreset::Fig4b.specs().remove(0);
    let points = grid(&spec).unwrap();
    let forward: Vec<_> = points.iter().map(|p| evaluate_point(&spec, p)).collect();
    let mut backward: Vec<_> = points
        .iter()
        .rev()
        .map(|p| evaluate_point(&spec, p))
        .collect();
    backward.reverse();
    assert_eq!(forward, backward);
}

#[test]
fn two_excited_sweep_hits_both_boundaries() {
    let spec = SweepSpec {
        case: Case::TwoExcited,
        fixed: vec![(Param::Nbar, 5.0)],
        axes: vec![Axis::Linspace {
            param: Param::EpsE,
            min: -1.0,
            max: 0.2,
            steps: 13,
            endpoint: true,
        }],
        observables: vec![Observable::TRatio, Observable::Regime],
    };
    let recs = run_sweep(&spec).unwrap();
    assert_eq!(recs.first().unwrap().validity, Validity::Zero);
    assert_eq!(recs.last().unwrap().validity, Validity::Divergent);
    assert_eq!(
        recs.last().unwrap().observables.regime,
        Some(RegimeLabel::Unphysical)
    );
}
