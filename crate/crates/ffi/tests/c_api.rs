use std::ffi::{CStr, CString};
use std::ptr;

use treeauto_ffi::*;

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    ta_string_free(p);
    s
}

unsafe fn catalog(name: &str) -> *mut TaGroup {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(ta_group_from_catalog(name.as_ptr(), &mut g), TaStatus::Ok);
    g
}

unsafe fn eval(g: *const TaGroup, word: &str) -> *mut TaAutomorphism {
    let word = CString::new(word).unwrap();
    let mut a = ptr::null_mut();
    assert_eq!(ta_group_evaluate(g, word.as_ptr(), &mut a), TaStatus::Ok);
    a
}

#[test]
fn tullio_through_the_c_api() {
    unsafe {
        let g = catalog("tullio");
        assert_eq!(ta_group_len(g), 2);
        let a = eval(g, "a");
        let b = eval(g, "b");

        let v = [0u8, 1, 1];
        let mut image = [9u8; 3];
        assert_eq!(ta_apply(a, v.as_ptr(), 3, image.as_mut_ptr()), TaStatus::Ok);
        assert_eq!(image, [1, 1, 1]);

        let mut activity = TaActivity {
            kind: TaActivityClass::Exponential,
            depth: 0,
            degree: 0,
        };
        assert_eq!(ta_classify(a, &mut activity), TaStatus::Ok);
        assert_eq!(activity.kind, TaActivityClass::Bounded);
        assert_eq!(ta_classify(b, &mut activity), TaStatus::Ok);
        assert_eq!(activity.kind, TaActivityClass::Polynomial);
        assert_eq!(activity.degree, 1);

        let mut s = ptr::null_mut();
        assert_eq!(ta_theta(b, 3, &mut s), TaStatus::Ok);
        assert_eq!(take_string(s), "4");
        assert_eq!(ta_singular_measure(b, &mut s), TaStatus::Ok);
        assert_eq!(take_string(s), "0/1");

        // a a^-1 = 1 and (ba)|_1 = ba
        let mut ai = ptr::null_mut();
        assert_eq!(ta_invert(a, &mut ai), TaStatus::Ok);
        let mut e = ptr::null_mut();
        assert_eq!(ta_compose(a, ai, &mut e), TaStatus::Ok);
        let mut yes = false;
        assert_eq!(ta_is_identity(e, &mut yes), TaStatus::Ok);
        assert!(yes);
        assert_eq!(ta_num_states(e), 1);
        let mut ba = ptr::null_mut();
        assert_eq!(ta_compose(b, a, &mut ba), TaStatus::Ok);
        let mut sec = ptr::null_mut();
        assert_eq!(ta_section(ba, [1u8].as_ptr(), 1, &mut sec), TaStatus::Ok);
        assert_eq!(ta_equal(sec, ba, &mut yes), TaStatus::Ok);
        assert!(yes);

        for h in [a, b, ai, e, ba, sec] {
            ta_automorphism_free(h);
        }
        ta_group_free(g);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = CString::new("alphabet 2\nstate a\nperm 1 1\n").unwrap();
        assert_eq!(ta_group_from_text(bad.as_ptr(), &mut g), TaStatus::Parse);
        assert!(g.is_null());
        let msg = CStr::from_ptr(ta_last_error()).to_str().unwrap();
        assert!(msg.contains("line 3"), "{msg}");

        let nope = CString::new("nope").unwrap();
        assert_eq!(ta_group_from_catalog(nope.as_ptr(), &mut g), TaStatus::UnknownName);
        assert_eq!(ta_group_from_catalog(ptr::null(), &mut g), TaStatus::NullPointer);

        let g = catalog("adding_machine");
        let w = CString::new("z").unwrap();
        let mut a = ptr::null_mut();
        assert_eq!(ta_group_evaluate(g, w.as_ptr(), &mut a), TaStatus::UnknownName);
        let a = eval(g, "a");
        let mut image = [0u8; 1];
        assert_eq!(ta_apply(a, [5u8].as_ptr(), 1, image.as_mut_ptr()), TaStatus::InvalidArgument);
        assert_eq!(ta_apply(a, [0u8].as_ptr(), 1, image.as_mut_ptr()), TaStatus::Ok);
        assert!(ta_last_error().is_null());

        let k3 = catalog("gupta_sidki_3");
        let t = eval(k3, "t");
        let mut out = ptr::null_mut();
        assert_eq!(ta_compose(a, t, &mut out), TaStatus::AlphabetMismatch);

        assert_eq!(ta_arity(ptr::null()), 0);
        ta_automorphism_free(ptr::null_mut());
        ta_group_free(ptr::null_mut());
        ta_string_free(ptr::null_mut());
        for h in [a, t] {
            ta_automorphism_free(h);
        }
        ta_group_free(g);
        ta_group_free(k3);
    }
}

#[test]
fn text_round_trip() {
    unsafe {
        let g = catalog("grigorchuk");
        let mut text = ptr::null_mut();
        assert_eq!(ta_group_to_text(g, &mut text), TaStatus::Ok);
        let text = take_string(text);
        let c = CString::new(text).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(ta_group_from_text(c.as_ptr(), &mut h), TaStatus::Ok);
        assert_eq!(ta_group_len(h), 4);
        let (x, y) = (eval(g, "b c"), eval(h, "d"));
        let mut same = false;
        assert_eq!(ta_equal(x, y, &mut same), TaStatus::Ok);
        assert!(same);
        ta_automorphism_free(x);
        ta_automorphism_free(y);
        ta_group_free(g);
        ta_group_free(h);
    }
}

#[test]
fn header_lists_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/treeauto.h")).unwrap();
    for f in [
        "ta_group_from_text",
        "ta_group_from_catalog",
        "ta_compose",
        "ta_invert",
        "ta_section",
        "ta_apply",
        "ta_theta",
        "ta_classify",
        "ta_singular_measure",
        "ta_last_error",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f}");
    }
    assert!(header.contains("typedef struct TaGroup TaGroup;"));
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(ta_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
