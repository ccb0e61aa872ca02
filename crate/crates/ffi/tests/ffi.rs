use std::ffi::{CStr, CString};
use std::ptr;

use scc_ffi::*;
use serde_json::Value;

fn last_error() -> String {
    unsafe { CStr::from_ptr(scc_last_error()) }.to_str().unwrap().to_owned()
}

fn rule(kind: SccRuleKind, param: u32, n: u32, m: u32) -> *mut SccHandle {
    let mut h = ptr::null_mut();
    let status = unsafe { scc_new_rule(kind, param, n, m, &mut h) };
    assert_eq!(status, SccStatus::Ok, "{}", last_error());
    assert!(!h.is_null());
    h
}

unsafe fn take_json(s: *mut std::os::raw::c_char) -> Option<Value> {
    if s.is_null() {
        return None;
    }
    let v = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
    scc_string_free(s);
    Some(v)
}

fn check(h: *const SccHandle, p: SccProperty) -> bool {
    let mut holds = false;
    assert_eq!(unsafe { scc_check(h, p, &mut holds) }, SccStatus::Ok);
    holds
}

#[test]
fn rule_handle_lifecycle() {
    let h = rule(SccRuleKind::Dictatorial, 1, 2, 3);
    unsafe {
        assert_eq!(scc_voters(h), 2);
        assert_eq!(scc_alternatives(h), 3);
        // voter 0 ranks c>b>a, voter 1 ranks b>a>c; dictator 1 picks b
        let ballots = [2u8, 1, 0, 1, 0, 2];
        let mut mask = 0u8;
        assert_eq!(scc_evaluate(h, ballots.as_ptr(), ballots.len(), &mut mask), SccStatus::Ok);
        assert_eq!(mask, 0b010);

        let mut dictators = 0u64;
        assert_eq!(scc_weak_dictators(h, &mut dictators), SccStatus::Ok);
        assert_eq!(dictators, 0b10);

        let mut code = ptr::null_mut();
        assert_eq!(scc_table_code(h, &mut code), SccStatus::Ok);
        let text = CStr::from_ptr(code).to_owned();
        scc_string_free(code);
        assert!(text.to_str().unwrap().starts_with("2x3:"));

        let mut again = ptr::null_mut();
        assert_eq!(scc_from_code(text.as_ptr(), &mut again), SccStatus::Ok);
        let mut other = 0u8;
        assert_eq!(scc_evaluate(again, ballots.as_ptr(), ballots.len(), &mut other), SccStatus::Ok);
        assert_eq!(other, mask);
        scc_free(again);
        scc_free(h);
        scc_free(ptr::null_mut());
    }
    for p in [SccProperty::Spo, SccProperty::Spp, SccProperty::Onto, SccProperty::Taylor, SccProperty::DsHalf] {
        let h = rule(SccRuleKind::Omninomination, 0, 2, 3);
        assert!(check(h, p));
        unsafe { scc_free(h) };
    }
}

#[test]
fn borda_witnesses_cross_the_boundary() {
    let h = rule(SccRuleKind::BordaSet, 0, 2, 3);
    assert!(!check(h, SccProperty::Taylor));
    assert!(!check(h, SccProperty::DsHalf));
    unsafe {
        let mut out = ptr::null_mut();
        let mut found = 0;
        for mode in [SccMode::Optimist, SccMode::Pessimist] {
            assert_eq!(scc_taylor_witness_json(h, mode, &mut out), SccStatus::Ok);
            if let Some(w) = take_json(out) {
                assert!(w["voter"].is_u64());
                found += 1;
            }
        }
        assert!(found > 0);
        assert_eq!(scc_ds_witness_json(h, SccModel::SeededRandom, 5, &mut out), SccStatus::Ok);
        let w = take_json(out).expect("random-model witness");
        assert!(w["eu_deviate"].as_str().unwrap().contains('/'));
        scc_free(h);
    }
    let dict = rule(SccRuleKind::Dictatorial, 0, 2, 3);
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(scc_ds_witness_json(dict, SccModel::HalfHalf, 0, &mut out), SccStatus::Ok);
        assert!(out.is_null());
        scc_free(dict);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(scc_new_rule(SccRuleKind::Dictatorial, 5, 2, 3, &mut h), SccStatus::Domain);
        assert!(!last_error().is_empty());
        assert_eq!(scc_new_rule(SccRuleKind::BordaSet, 0, 2, 3, ptr::null_mut()), SccStatus::NullPointer);
        assert_eq!(scc_new_rule(SccRuleKind::BordaSet, 0, 9, 8, &mut h), SccStatus::TooLarge);

        let bad = CString::new("{\"alternatives\": [\"a\"]").unwrap();
        assert_eq!(scc_from_json(bad.as_ptr(), &mut h), SccStatus::Format);
        let code = CString::new("1x3:0.1").unwrap();
        assert_ne!(scc_from_code(code.as_ptr(), &mut h), SccStatus::Ok);
        let path = CString::new("/nonexistent/scc.json").unwrap();
        assert_ne!(scc_load(path.as_ptr(), &mut h), SccStatus::Ok);
        let invalid = [0xffu8, 0xfe, 0];
        assert_eq!(scc_from_code(invalid.as_ptr().cast(), &mut h), SccStatus::InvalidUtf8);

        let mut holds = false;
        assert_eq!(scc_check(ptr::null(), SccProperty::Spo, &mut holds), SccStatus::NullPointer);
        assert_eq!(scc_voters(ptr::null()), 0);

        let f = rule(SccRuleKind::ParetoSet, 0, 2, 3);
        let mut mask = 0u8;
        let repeated = [0u8, 0, 1, 0, 1, 2];
        assert_eq!(scc_evaluate(f, repeated.as_ptr(), 6, &mut mask), SccStatus::Domain);
        assert_eq!(scc_evaluate(f, repeated.as_ptr(), 5, &mut mask), SccStatus::Domain);
        // a successful call clears the message
        let fine = [0u8, 1, 2, 0, 1, 2];
        assert_eq!(scc_evaluate(f, fine.as_ptr(), 6, &mut mask), SccStatus::Ok);
        assert_eq!(mask, 0b001);
        assert!(last_error().is_empty());
        scc_free(f);
    }
}

#[test]
fn json_and_file_constructors_agree() {
    let json = r#"{"alternatives": ["x", "y", "z"], "voters": 2, "rule": {"name": "borda-set"}}"#;
    let dir = std::env::temp_dir().join(format!("scc-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("borda.json");
    std::fs::write(&file, json).unwrap();
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        let text = CString::new(json).unwrap();
        assert_eq!(scc_from_json(text.as_ptr(), &mut a), SccStatus::Ok);
        let path = CString::new(file.to_str().unwrap()).unwrap();
        assert_eq!(scc_load(path.as_ptr(), &mut b), SccStatus::Ok);
        let codes: Vec<String> = [a, b]
            .iter()
            .map(|&h| {
                let mut out = ptr::null_mut();
                assert_eq!(scc_table_code(h, &mut out), SccStatus::Ok);
                let s = CStr::from_ptr(out).to_str().unwrap().to_owned();
                scc_string_free(out);
                s
            })
            .collect();
        assert_eq!(codes[0], codes[1]);
        scc_free(a);
        scc_free(b);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verification_report_over_ffi() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(scc_verify_json(2, 3, false, 30, 1, 2, 2, true, &mut out), SccStatus::Ok);
        let r = take_json(out).unwrap();
        assert_eq!(r["clean"], true);
        assert!(r["checked"].as_u64().unwrap() >= 30);
        assert_eq!(scc_verify_json(1, 2, true, 0, 0, 0, 1, false, &mut out), SccStatus::Domain);
        assert!(last_error().contains("3 alternatives"));
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/scc_ffi.h")).unwrap();
    for name in [
        "scc_last_error",
        "scc_new_rule",
        "scc_from_json",
        "scc_load",
        "scc_from_code",
        "scc_free",
        "scc_string_free",
        "scc_evaluate",
        "scc_check",
        "scc_weak_dictators",
        "scc_taylor_witness_json",
        "scc_ds_witness_json",
        "scc_table_code",
        "scc_verify_json",
        "typedef struct SccHandle SccHandle",
        "SCC_STATUS_NULL_POINTER",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
