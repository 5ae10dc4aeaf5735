use ultrafine::catalog;
use ultrafine::chain::{solvability_report, PerturbationConfig, SamplingConfig};
use ultrafine::format::{load_algebra_file, report_from_json, report_to_json, AlgebraFile};
use ultrafine::lie::find_jh_flag;
use ultrafine::Error;

fn quick() -> SamplingConfig {
    SamplingConfig {
        samples: 300,
        ..SamplingConfig::default()
    }
}

#[test]
fn report_round_trips_byte_for_byte() {
    for name in ["heisenberg3", "axb", "diag3:-1/2", "filiform4"] {
        let flag = find_jh_flag(&catalog::lookup(name).unwrap()).unwrap();
        let report = solvability_report(&flag, &quick(), &PerturbationConfig::default()).unwrap();
        let json = report_to_json(&report);
        let back = report_from_json(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(report_to_json(&back), json);
        assert_eq!(back.flag_rows().unwrap(), flag.basis_rows());
        assert!(report.openness.passed(), "{name}");
    }
}

#[test]
fn seeds_only_add_labels() {
    let flag = find_jh_flag(&catalog::filiform4()).unwrap();
    let a = solvability_report(&flag, &quick(), &PerturbationConfig::default()).unwrap();
    let b = solvability_report(
        &flag,
        &SamplingConfig { seed: 99, ..quick() },
        &PerturbationConfig::default(),
    )
    .unwrap();
    for l in &a.layers {
        let twin = b.layers.iter().find(|m| m.label.ultrafine == l.label.ultrafine);
        if let Some(t) = twin {
            assert_eq!(t.label.fine, l.label.fine);
            assert_eq!(t.orbit_dim, l.orbit_dim);
        }
    }
}

#[test]
fn character_layers_vanish_on_the_derived_algebra() {
    let flag = find_jh_flag(&catalog::free2step3()).unwrap();
    let report = solvability_report(&flag, &quick(), &PerturbationConfig::default()).unwrap();
    let derived = flag.adapted().derived_algebra();
    for layer in &report.layers {
        for w in &layer.witnesses {
            let vanishes = derived.basis().iter().all(|v| w.eval(v) == ultrafine::scalar::int(0));
            assert_eq!(vanishes, layer.character);
            assert_eq!(layer.character, layer.label.ultrafine.e.is_empty());
        }
    }
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(matches!(report_from_json("{}"), Err(Error::Parse(_))));
    assert!(AlgebraFile::from_json_str("[1,2]").is_err());
    assert!(AlgebraFile::from_toml_str("name = 3").is_err());
    assert!(load_algebra_file("catalog:nope").is_err());
    assert!(load_algebra_file("/nonexistent/file.json").is_err());
    let jacobi = r#"{"name":"bad","dim":3,"basis":["X","Y","Z"],"brackets":[
        {"i":"X","j":"Y","coeffs":[0,0,1]},{"i":"X","j":"Z","coeffs":[1,0,0]}]}"#;
    let e = AlgebraFile::from_json_str(jacobi).unwrap().to_algebra().unwrap_err();
    assert!(matches!(e, Error::Jacobi { i: 1, j: 2, k: 3, .. }), "{e}");
}
