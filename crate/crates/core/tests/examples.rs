//! Runs every shipped example to completion.

use std::path::PathBuf;
use std::process::Command;

fn examples_dir() -> PathBuf {
    // target/<profile>/deps/<this test> -> target/<profile>/examples
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("examples")
}

fn run_example(name: &str) -> String {
    let path = examples_dir().join(name);
    assert!(path.exists(), "example {name} not built at {}", path.display());
    let out = Command::new(&path).output().unwrap();
    assert!(
        out.status.success(),
        "{name} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn convex_bodies() {
    assert!(!run_example("convex_bodies").is_empty());
}

#[test]
fn volumes() {
    assert!(!run_example("volumes").is_empty());
}

#[test]
fn systoles() {
    assert!(!run_example("systoles").is_empty());
}

#[test]
fn great_circles() {
    assert!(!run_example("great_circles").is_empty());
}

#[test]
fn weighted_split() {
    assert!(!run_example("weighted_split").is_empty());
}

#[test]
fn projective_plane() {
    assert!(!run_example("projective_plane").is_empty());
}

#[test]
fn check_surface() {
    let out = run_example("check_surface");
    assert!(out.contains("klein_sharp            Pass"));
    assert!(!out.contains("Fail"));
}

#[test]
fn random_suite() {
    assert!(!run_example("random_suite").is_empty());
}

#[test]
fn john_klein() {
    assert!(!run_example("john_klein").is_empty());
}
