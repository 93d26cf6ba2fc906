use proptest::prelude::*;
use tfche_cli::config::{HistoryKind, InitKind, Mobility};
use tfche_cli::io::SnapshotFile;
use tfche_cli::RunConfig;

fn config_json(
    alpha: f64,
    nx_pow: u32,
    mobility: Mobility,
    history: HistoryKind,
    kind: InitKind,
    seed: u64,
    amplitude: f64,
) -> String {
    serde_json::json!({
        "alpha": alpha,
        "epsilon": 0.05,
        "grid": {"nx": 1usize << nx_pow, "lx": 6.5},
        "mobility": mobility,
        "dt": 0.01,
        "t_end": 1.0,
        "history": {"mode": history, "tol": 1e-7},
        "init": {"kind": kind, "seed": seed, "amplitude": amplitude, "radius": 1.0},
        "output": {"dir": "somewhere", "series_every": 3},
    })
    .to_string()
}

proptest! {
    #[test]
    fn config_round_trip(
        alpha in 0.01f64..=1.0,
        nx_pow in 3u32..8,
        one_sided in any::<bool>(),
        direct in any::<bool>(),
        kind in prop_oneof![Just(InitKind::Random), Just(InitKind::Circle), Just(InitKind::Tanh1d)],
        seed in any::<u64>(),
        amplitude in 0.0f64..1.0,
    ) {
        let mobility = if one_sided { Mobility::OneSided } else { Mobility::Constant };
        let history = if direct { HistoryKind::Direct } else { HistoryKind::Soe };
        let text = config_json(alpha, nx_pow, mobility, history, kind, seed, amplitude);
        let a = RunConfig::from_json(&text).unwrap();
        let b = RunConfig::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.init.seed, seed);
        prop_assert_eq!(a.alpha.to_bits(), alpha.to_bits());
    }

    #[test]
    fn snapshot_round_trip(
        bits in prop::collection::vec(any::<u64>(), 64),
        t in any::<f64>(),
    ) {
        // Arbitrary bit patterns, NaN payloads included, must survive unchanged.
        let snap = SnapshotFile {
            nx: 8,
            ny: 8,
            alpha: 0.9,
            epsilon: 0.05,
            t,
            values: bits.iter().map(|&b| f64::from_bits(b)).collect(),
        };
        let mut buf = Vec::new();
        snap.write_to(&mut buf).unwrap();
        let back = SnapshotFile::read_from(&mut buf.as_slice()).unwrap();
        let back_bits: Vec<u64> = back.values.iter().map(|v| v.to_bits()).collect();
        prop_assert_eq!(back_bits, bits);
        prop_assert_eq!(back.t.to_bits(), t.to_bits());
    }
}
