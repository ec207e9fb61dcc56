use std::ffi::{CStr, CString};
use std::ptr;

use witsets_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { ws_string_free(p) };
    s
}

#[test]
fn sphere_round_trip_and_verify() {
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { ws_sphere(4, 2, &mut code) }, WsStatus::Ok);
    assert_eq!(unsafe { ws_code_size(code) }, 6);
    assert_eq!(unsafe { ws_code_length(code) }, 4);

    let mut holds = false;
    assert_eq!(unsafe { ws_verify(code, 2, &mut holds) }, WsStatus::Ok);
    assert!(holds);
    assert_eq!(unsafe { ws_verify(code, 1, &mut holds) }, WsStatus::Ok);
    assert!(!holds);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ws_code_render(code, &mut text) }, WsStatus::Ok);
    let text = take_string(text);
    assert!(text.starts_with("n 4\n0011\n"));

    let c_text = CString::new(text).unwrap();
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { ws_code_parse(c_text.as_ptr(), &mut again) }, WsStatus::Ok);
    assert_eq!(unsafe { ws_code_size(again) }, 6);

    let (mut num, mut den) = (0, 0);
    assert_eq!(unsafe { ws_gamma(code, 2, &mut num, &mut den) }, WsStatus::Ok);
    assert_eq!((num, den), (2, 1));

    let mut mask = 0;
    assert_eq!(unsafe { ws_min_witness(code, 0, &mut mask) }, WsStatus::Ok);
    assert_eq!(mask.count_ones(), 2);

    unsafe {
        ws_code_free(code);
        ws_code_free(again);
    }
}

#[test]
fn families_and_constructions() {
    let fam = ws_steiner_3_4_8();
    assert_eq!(unsafe { ws_family_block_count(fam) }, 14);
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { ws_family_code(fam, &mut code) }, WsStatus::Ok);
    assert_eq!(unsafe { ws_code_size(code) }, 70);
    unsafe {
        ws_code_free(code);
        ws_family_free(fam);
    }
    let fam = ws_steiner_5_6_12();
    assert_eq!(unsafe { ws_family_block_count(fam) }, 132);
    unsafe { ws_family_free(fam) };

    let mut tp = ptr::null_mut();
    assert_eq!(unsafe { ws_two_part_sphere(9, 7, 1, &mut tp) }, WsStatus::Ok);
    assert_eq!(unsafe { ws_code_size(tp) }, 135);
    unsafe { ws_code_free(tp) };
}

#[test]
fn errors_are_reported() {
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { ws_sphere(3, 4, &mut code) }, WsStatus::InvalidArgument);
    assert!(code.is_null());
    let msg = unsafe { CStr::from_ptr(ws_last_error()) }.to_str().unwrap();
    assert!(msg.contains("exceeds"));

    let bad = CString::new("n 3\n10\n").unwrap();
    assert_eq!(unsafe { ws_code_parse(bad.as_ptr(), &mut code) }, WsStatus::Parse);
    assert_eq!(unsafe { ws_code_parse(ptr::null(), &mut code) }, WsStatus::NullPointer);
    assert_eq!(unsafe { ws_verify(ptr::null(), 1, ptr::null_mut()) }, WsStatus::NullPointer);

    let dup = [1u64, 1];
    assert_eq!(unsafe { ws_code_from_bits(2, dup.as_ptr(), 2, &mut code) }, WsStatus::InvalidArgument);
    let ok = [0u64, 3];
    assert_eq!(unsafe { ws_code_from_bits(2, ok.as_ptr(), 2, &mut code) }, WsStatus::Ok);
    let mut word = 0;
    assert_eq!(unsafe { ws_code_word(code, 1, &mut word) }, WsStatus::Ok);
    assert_eq!(word, 3);
    assert_eq!(unsafe { ws_code_word(code, 2, &mut word) }, WsStatus::InvalidArgument);
    unsafe { ws_code_free(code) };
    assert_eq!(unsafe { ws_code_size(ptr::null()) }, 0);
}

#[test]
fn json_entry_points() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ws_bounds_json(10, 2, &mut out) }, WsStatus::Ok);
    let json = take_string(out);
    assert!(json.contains("\"best_lower\": \"45\""));

    assert_eq!(unsafe { ws_solve_json(2, 1, -1, 0.0, &mut out) }, WsStatus::Ok);
    let json = take_string(out);
    assert!(json.contains("\"value\": \"2\""));
    assert!(json.contains("\"status\": \"exact\""));

    assert_eq!(unsafe { ws_solve_json(5, 2, 2, 0.0, &mut out) }, WsStatus::Ok);
    assert!(take_string(out).contains("\"value\": \"10\""));

    assert_eq!(unsafe { ws_solve_json(9, 2, -1, 0.0, &mut out) }, WsStatus::TooLarge);
}

#[test]
fn version_matches() {
    let v = unsafe { CStr::from_ptr(ws_version()) }.to_str().unwrap();
    assert_eq!(v, witsets::VERSION);
}
