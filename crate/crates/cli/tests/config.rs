use proptest::prelude::*;

use qthalf_cli::{CliError, Kind, RunConfig};

fn pow2(lo: u32, hi: u32) -> impl Strategy<Value = usize> {
    (lo..=hi).prop_map(|e| 1usize << e)
}

prop_compose! {
    fn configs()(
        kind in prop::sample::select(Kind::ALL.to_vec()),
        seed in 0..=i64::MAX as u64,
        n in 2usize..=3,
        xi in 0.1f64..1.0,
        (a, b, c) in (0.01f64..2.0, 0.0f64..2.0, 0.01f64..2.0),
        n_tan in pow2(3, 6),
        n_wall in pow2(3, 6),
        (l_tan, h_wall) in (1.0f64..50.0, 1.0f64..50.0),
        theta in 0.01f64..0.49,
        epsilon in 0.95f64..1.5,
        args in prop::collection::vec(0.0f64..0.99, 1..4),
        widths in prop::collection::vec(0.1f64..10.0, 1..5),
        samples in 1usize..500,
        tol in 1e-14f64..1.0,
    ) -> RunConfig {
        let mut c0 = RunConfig::default();
        c0.run.kind = kind;
        c0.run.seed = seed;
        c0.model.n = n;
        c0.model.xi = xi;
        c0.model.a = a;
        c0.model.b = b;
        c0.model.c = c;
        c0.grid.n_tan = n_tan;
        c0.grid.n_wall = n_wall + 1;
        c0.grid.l_tan = l_tan;
        c0.grid.h_wall = h_wall;
        c0.scheme.theta = theta;
        c0.resolvent.epsilon = epsilon;
        c0.resolvent.args = args;
        c0.decay.widths = widths;
        c0.gn.samples = samples;
        c0.tolerances.decay_slope = tol;
        c0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emitted_text_round_trips(c in configs()) {
        let text = c.emit();
        let back = RunConfig::parse(&text).expect("emitted config parses");
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.emit(), text);
    }
}

#[test]
fn defaults_fill_missing_keys() {
    let c = RunConfig::parse("[model]\nxi = 0.5\n[run]\nkind = \"picard\"\n").unwrap();
    assert_eq!(c.model.xi, 0.5);
    assert_eq!(c.run.kind, Kind::Picard);
    assert_eq!(c.grid, RunConfig::default().grid);
}

#[test]
fn theta_outside_the_integrability_range_is_rejected() {
    for theta in [0.6, 0.5, 0.0, -0.1] {
        let err = RunConfig::parse(&format!("[scheme]\ntheta = {theta:?}\n")).unwrap_err();
        let CliError::Config(msgs) = &err else { panic!("wrong error kind: {err}") };
        assert!(msgs.iter().any(|m| m.contains("0 < theta < 1/2")), "{msgs:?}");
        assert_eq!(err.exit_code(), 2);
    }
}

#[test]
fn malformed_text_is_a_config_error() {
    for text in ["[model\n", "[model]\nxi = \"one\"\n", "[nope]\nx = 1\n", "[run]\nkind = \"sweep\"\n"] {
        let err = RunConfig::parse(text).unwrap_err();
        assert!(matches!(err, CliError::Config(_)), "{text:?} gave {err}");
    }
}

#[test]
fn seeds_beyond_toml_integers_are_rejected() {
    let mut c = RunConfig::default();
    c.run.seed = u64::MAX;
    let err = c.validate().unwrap_err();
    assert!(err.to_string().contains("run.seed"), "{err}");
    assert!(qthalf_cli::run_experiment(&c).is_err());
}
