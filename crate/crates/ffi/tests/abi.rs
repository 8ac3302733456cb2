use std::ffi::{CStr, CString};
use std::ptr;

use libc::c_char;
use websplit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ws_string_free(s);
    out
}

fn last_error() -> String {
    let p = ws_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const MR: &str = r#"["Ann | birthPlace | Rome", "Rome | country | Italy"]"#;

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(ws_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn segment_returns_json_sentences() {
    let mut out = ptr::null_mut();
    let status = unsafe { ws_segment(c("Dr. Smith left. He came back.").as_ptr(), &mut out) };
    assert_eq!(status, WsStatus::Ok);
    assert!(ws_last_error().is_null());
    let sentences: Vec<String> = serde_json::from_str(&unsafe { take(out) }).unwrap();
    assert_eq!(sentences, ["Dr. Smith left.", "He came back."]);
}

#[test]
fn bleu_hand_example_and_identity() {
    let hyp = c("a b c d e");
    let r = c("a b c d f");
    let refs = [r.as_ptr()];
    let mut score = -1.0;
    assert_eq!(unsafe { ws_bleu4(hyp.as_ptr(), refs.as_ptr(), 1, &mut score) }, WsStatus::Ok);
    assert!((score - 66.874).abs() < 0.01, "{score}");
    let refs = [hyp.as_ptr()];
    assert_eq!(unsafe { ws_bleu4(hyp.as_ptr(), refs.as_ptr(), 1, &mut score) }, WsStatus::Ok);
    assert_eq!(score, 100.0);
}

#[test]
fn null_arguments_are_reported() {
    let mut score = 0.0;
    assert_eq!(unsafe { ws_bleu4(ptr::null(), ptr::null(), 0, &mut score) }, WsStatus::NullPointer);
    assert!(last_error().contains("hyp"));
    assert_eq!(unsafe { ws_segment(c("x").as_ptr(), ptr::null_mut()) }, WsStatus::NullPointer);
    let mut out = ptr::null_mut();
    let status = unsafe { ws_predict_partition(ptr::null(), c(MR).as_ptr(), &mut out) };
    assert_eq!(status, WsStatus::NullPointer);
    assert!(out.is_null());
    unsafe {
        ws_string_free(ptr::null_mut());
        ws_split_model_free(ptr::null_mut());
        ws_index_free(ptr::null_mut());
    }
}

#[test]
fn bad_inputs_map_to_error_codes() {
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { ws_split_model_from_json(c("{").as_ptr(), &mut model) }, WsStatus::InvalidInput);
    assert!(model.is_null());
    let missing = c("/nonexistent/websplit/model.json");
    assert_eq!(unsafe { ws_split_model_load(missing.as_ptr(), &mut model) }, WsStatus::Io);
    assert!(last_error().contains("nonexistent"));

    let mut out = ptr::null_mut();
    let bad_mr = c(r#"["only | two"]"#);
    let status = unsafe { ws_split_and_rephrase(ptr::null(), ptr::null(), c("x").as_ptr(), bad_mr.as_ptr(), &mut out) };
    assert_eq!(status, WsStatus::InvalidInput);
    assert!(last_error().starts_with("mr_json"));

    let bytes = [0xffu8, 0];
    let status = unsafe { ws_segment(bytes.as_ptr().cast(), &mut out) };
    assert_eq!(status, WsStatus::InvalidUtf8);
}

#[test]
fn template_fallback_without_handles() {
    let mut out = ptr::null_mut();
    let status = unsafe { ws_split_and_rephrase(ptr::null(), ptr::null(), c("x").as_ptr(), c(MR).as_ptr(), &mut out) };
    assert_eq!(status, WsStatus::Ok);
    assert_eq!(unsafe { take(out) }, "Ann birth place Rome . Rome country Italy .");
}

#[test]
fn handles_round_trip_through_json() {
    let mr: websplit::rdf::TripleSet = serde_json::from_str(MR).unwrap();
    let mut model = websplit::splitter::SplitModel::default();
    let joint = websplit::rdf::Partition::from_assignment(&mr, &[0, 0]).unwrap();
    let pattern = websplit::splitter::pattern_of(&mr, &joint).unwrap();
    model.observe(pattern.skeleton, pattern.assignment);
    let index = websplit::generator::RetrievalIndex::train([(&mr, "Ann was born in Rome, Italy.")]);

    let mut m = ptr::null_mut();
    let mut i = ptr::null_mut();
    unsafe {
        assert_eq!(ws_split_model_from_json(c(&model.to_json()).as_ptr(), &mut m), WsStatus::Ok);
        assert_eq!(ws_index_from_json(c(&index.to_json()).as_ptr(), &mut i), WsStatus::Ok);

        let mut out = ptr::null_mut();
        assert_eq!(ws_predict_partition(m, c(MR).as_ptr(), &mut out), WsStatus::Ok);
        let blocks: Vec<Vec<String>> = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(blocks, [["Ann | birthPlace | Rome", "Rome | country | Italy"]]);

        assert_eq!(ws_split_and_rephrase(m, i, c("x").as_ptr(), c(MR).as_ptr(), &mut out), WsStatus::Ok);
        assert_eq!(take(out), "Ann was born in Rome, Italy.");

        ws_split_model_free(m);
        ws_index_free(i);
    }
}
