use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use canvar_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(canvar_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn berger_scalar_through_the_abi() {
    let mut chart = ptr::null_mut();
    let st = unsafe {
        canvar_chart_open_varied(c("berger_s3").as_ptr(), c("E").as_ptr(), -2.0, &mut chart)
    };
    assert_eq!(st, CanvarStatus::Ok);
    assert_eq!(unsafe { canvar_chart_dim(chart) }, 3);
    let p = [0.5, 0.2, -0.4];
    let (mut s, mut g, mut ric, mut gam) = (0.0, [0.0; 9], [0.0; 9], [0.0; 27]);
    let st = unsafe {
        canvar_curvature(
            chart,
            p.as_ptr(),
            3,
            CanvarMode::ForwardExact,
            &mut s,
            g.as_mut_ptr(),
            ric.as_mut_ptr(),
            gam.as_mut_ptr(),
        )
    };
    assert_eq!(st, CanvarStatus::Ok);
    assert!((s - 10.0).abs() < 1e-10);
    assert!(g[0] > 0.0 && ric.iter().any(|x| *x != 0.0));
    let st = unsafe {
        canvar_curvature(
            chart,
            p.as_ptr(),
            3,
            CanvarMode::ForwardExact,
            &mut s,
            ptr::null_mut(),
            ptr::null_mut(),
            ptr::null_mut(),
        )
    };
    assert_eq!(st, CanvarStatus::Ok);
    let st = unsafe {
        canvar_curvature(
            chart,
            p.as_ptr(),
            2,
            CanvarMode::ForwardExact,
            &mut s,
            ptr::null_mut(),
            ptr::null_mut(),
            ptr::null_mut(),
        )
    };
    assert_eq!(st, CanvarStatus::DimensionMismatch);
    unsafe { canvar_chart_free(chart) };
}

#[test]
fn error_codes_and_messages() {
    let mut chart = ptr::null_mut();
    let st = unsafe { canvar_chart_open(c("klein_bottle").as_ptr(), &mut chart) };
    assert_eq!(st, CanvarStatus::UnknownManifold);
    assert!(last_error().contains("klein_bottle"));
    assert!(chart.is_null());
    assert_eq!(
        unsafe { canvar_chart_open(ptr::null(), &mut chart) },
        CanvarStatus::NullPointer
    );
    let st = unsafe {
        canvar_chart_open_varied(c("berger_s3").as_ptr(), c("F").as_ptr(), 1.0, &mut chart)
    };
    assert_eq!(st, CanvarStatus::UnknownField);
    let st = unsafe {
        canvar_chart_open_varied(c("berger_s3").as_ptr(), c("E").as_ptr(), -1.0, &mut chart)
    };
    assert_eq!(st, CanvarStatus::ForbiddenParameter);
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { canvar_nullsurf(c("slice_3").as_ptr(), 5, 1, &mut report) },
        CanvarStatus::NotLightlike
    );
    let st = unsafe {
        canvar_verify(
            c("berger_s3").as_ptr(),
            c("nonexistent").as_ptr(),
            [1.0].as_ptr(),
            1,
            42,
            5,
            CanvarMode::ForwardExact,
            &mut report,
        )
    };
    assert_eq!(st, CanvarStatus::UnknownIdentity);
    assert!(report.is_null());
    unsafe {
        canvar_chart_free(ptr::null_mut());
        canvar_report_free(ptr::null_mut());
    }
    assert_eq!(unsafe { canvar_chart_dim(ptr::null()) }, 0);
}

#[test]
fn incomplete_plane_length_and_geodesic() {
    let mut chart = ptr::null_mut();
    let st = unsafe {
        canvar_chart_open_varied(
            c("incomplete_plane").as_ptr(),
            c("E").as_ptr(),
            2.0,
            &mut chart,
        )
    };
    assert_eq!(st, CanvarStatus::Ok);
    let mut len = 0.0;
    let st = unsafe {
        canvar_line_length(
            chart,
            [0.0, 0.0].as_ptr(),
            [1.0, 1.0].as_ptr(),
            2,
            0.0,
            40.0,
            &mut len,
        )
    };
    assert_eq!(st, CanvarStatus::Ok);
    assert!((len - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    let (mut term, mut s, mut end, mut drift) = (CanvarTermination::ReachedT, 0.0, [0.0; 2], 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let st = unsafe {
        canvar_geodesic(
            chart,
            [0.0, 0.0].as_ptr(),
            [h, h].as_ptr(),
            2,
            10.0,
            &mut term,
            &mut s,
            end.as_mut_ptr(),
            &mut drift,
        )
    };
    assert_eq!(st, CanvarStatus::Ok);
    assert_ne!(term, CanvarTermination::ReachedT);
    assert!(s < h && drift < 1e-9);
    unsafe { canvar_chart_free(chart) };
}

#[test]
fn reports_carry_canonical_json() {
    let mut report = ptr::null_mut();
    let st = unsafe {
        canvar_verify(
            c("berger_s3").as_ptr(),
            c("cor3.9,prop4.1.4").as_ptr(),
            [-2.0, 1.0, 5.0].as_ptr(),
            3,
            42,
            10,
            CanvarMode::ForwardExact,
            &mut report,
        )
    };
    assert_eq!(st, CanvarStatus::Ok);
    assert_eq!(unsafe { canvar_report_cells(report) }, 6);
    assert_eq!(unsafe { canvar_report_failed(report) }, 0);
    let json = unsafe { CStr::from_ptr(canvar_report_json(report)) }
        .to_str()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["schema_version"], 1);
    unsafe { canvar_report_free(report) };

    let st = unsafe { canvar_nullsurf(c("cone_3").as_ptr(), 10, 42, &mut report) };
    assert_eq!(st, CanvarStatus::Ok);
    assert_eq!(unsafe { canvar_report_failed(report) }, 0);
    unsafe { canvar_report_free(report) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(canvar_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_header() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler found; skipping");
        return;
    }
    let lib = target_dir().join("libcanvar_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("canvar_smoke");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "{stdout}{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout.contains("scalar 10.000000"), "{stdout}");
}
