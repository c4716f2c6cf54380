use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use uavpoc_ffi::*;

fn last_error() -> String {
    let p = uavpoc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn config_round_trip_and_small_experiment() {
    unsafe {
        let json = CString::new(r#"{"n_nodes": 6, "topologies": 1, "trials": 2, "master_seed": 9}"#).unwrap();
        let mut cfg = ptr::null_mut();
        assert_eq!(uavpoc_config_from_json(json.as_ptr(), &mut cfg), UavpocStatus::Ok);

        let mut text = ptr::null_mut();
        assert_eq!(uavpoc_config_to_json(cfg, &mut text), UavpocStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().contains("\"n_nodes\": 6"));
        uavpoc_string_free(text);

        let mut exp = ptr::null_mut();
        assert_eq!(uavpoc_experiment_run(cfg, &mut exp), UavpocStatus::Ok);
        let mut count = 0;
        assert_eq!(uavpoc_experiment_record_count(exp, &mut count), UavpocStatus::Ok);
        assert_eq!(count, 6);
        let mut failures = 1;
        assert_eq!(uavpoc_experiment_failure_count(exp, &mut failures), UavpocStatus::Ok);
        assert_eq!(failures, 0);

        let mut rec = std::mem::zeroed::<UavpocRunRecord>();
        assert_eq!(uavpoc_experiment_record(exp, 0, &mut rec), UavpocStatus::Ok);
        assert_eq!((rec.scheme, rec.n, rec.topo, rec.trial), (UavpocScheme::Fuzzy, 6, 0, 0));
        assert!(rec.throughput >= 0.0 && rec.throughput <= rec.rate);
        assert_eq!(uavpoc_experiment_record(exp, 6, &mut rec), UavpocStatus::OutOfRange);
        assert!(last_error().contains("record 6"));

        let mut summary = ptr::null_mut();
        assert_eq!(uavpoc_experiment_summary_json(exp, cfg, &mut summary), UavpocStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(CStr::from_ptr(summary).to_str().unwrap()).unwrap();
        assert!(value["schemes"]["fuzzy"]["6"].is_object());
        uavpoc_string_free(summary);

        let dir = std::env::temp_dir().join(format!("uavpoc-ffi-{}", std::process::id()));
        let c_dir = CString::new(dir.to_str().unwrap()).unwrap();
        assert_eq!(uavpoc_experiment_write(exp, cfg, c_dir.as_ptr()), UavpocStatus::Ok);
        assert!(dir.join("runs.csv").exists() && dir.join("summary.json").exists());
        std::fs::remove_dir_all(&dir).unwrap();

        uavpoc_experiment_free(exp);
        uavpoc_config_free(cfg);
    }
}

#[test]
fn bad_inputs_report_status_and_message() {
    unsafe {
        let mut cfg = ptr::null_mut();
        let json = CString::new(r#"{"no_such_key": 1}"#).unwrap();
        assert_eq!(uavpoc_config_from_json(json.as_ptr(), &mut cfg), UavpocStatus::Parse);
        assert!(last_error().contains("no_such_key"));
        assert!(cfg.is_null());

        assert_eq!(uavpoc_config_from_json(ptr::null(), &mut cfg), UavpocStatus::NullPointer);
        let bytes = [0xffu8, 0];
        assert_eq!(uavpoc_config_from_json(bytes.as_ptr().cast(), &mut cfg), UavpocStatus::InvalidUtf8);

        assert_eq!(uavpoc_config_default(&mut cfg), UavpocStatus::Ok);
        assert_eq!(uavpoc_config_set_scale(cfg, 0, 1, 1, 0), UavpocStatus::InvalidArgument);
        assert_eq!(uavpoc_config_set_scale(cfg, 5, 1, 1, 3), UavpocStatus::Ok);
        uavpoc_config_free(cfg);
        uavpoc_config_free(ptr::null_mut());
        uavpoc_string_free(ptr::null_mut());

        let mut n = 0;
        assert_eq!(uavpoc_experiment_record_count(ptr::null(), &mut n), UavpocStatus::NullPointer);
    }
}

#[test]
fn primitives() {
    let a = UavpocTfn {
        center: 1.0,
        left: 1.0,
        right: 1.0,
    };
    let b = UavpocTfn {
        center: 1.5,
        left: 1.0,
        right: 1.0,
    };
    let mut sf = 0.0;
    unsafe {
        assert_eq!(uavpoc_satisfaction(a, b, false, &mut sf), UavpocStatus::Ok);
        assert!((sf - 307.0 / 384.0).abs() < 1e-5);
        let bad = UavpocTfn {
            center: 0.0,
            left: -1.0,
            right: 0.0,
        };
        assert_eq!(uavpoc_satisfaction(bad, b, true, &mut sf), UavpocStatus::InvalidArgument);

        let v = [1.0, 0.0];
        let mut w = [0.0; 2];
        assert_eq!(uavpoc_priority_vector(v.as_ptr(), 2, 0.5, 0.8, w.as_mut_ptr()), UavpocStatus::Ok);
        assert!((w[0] / w[1] - 9.0).abs() < 1e-3);
        assert_eq!(
            uavpoc_priority_vector(v.as_ptr(), 2, 0.5, 0.8, ptr::null_mut()),
            UavpocStatus::NullPointer
        );
        let mut tiny = [0.0; 2];
        assert_eq!(
            uavpoc_priority_vector([0.5, 0.2].as_ptr(), 2, 0.5, 0.8, tiny.as_mut_ptr()),
            UavpocStatus::InvalidArgument
        );
    }
    assert_eq!(uavpoc_interference_factor(0, 66.3), 2.0);
    assert_eq!(uavpoc_interference_factor(5, 1.0), 0.0);
    assert!(uavpoc_interference_factor(1, 0.0).is_infinite());
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = format!("{dir}/include/uavpoc.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["uavpoc_experiment_run", "uavpoc_last_error", "UAVPOC_STATUS_OK", "UavpocRunRecord"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let src = std::env::temp_dir().join(format!("uavpoc-header-{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"uavpoc.h\"\nint main(void) {\n  UavpocConfig *cfg = 0;\n  UavpocStatus s = uavpoc_config_default(&cfg);\n  uavpoc_config_free(cfg);\n  return s == UAVPOC_STATUS_OK ? 0 : 1;\n}\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&src)
        .status();
    std::fs::remove_file(&src).ok();
    match status {
        Ok(s) => assert!(s.success(), "C compiler rejected the header"),
        Err(_) => eprintln!("no C compiler found; skipped syntax check"),
    }
}
