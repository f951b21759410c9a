use framelab::decomposition::{decompose, FailureKind, WitnessIndex};
use framelab::gallery::{shift_frame, simplex_frame, simplex_subframe, Family, GallerySpec};
use framelab::io::{frame_from_csv, frame_from_json};
use framelab::multiplier::{multiplier_report, MultiplierSpec};
use framelab::unconditional::{c_epsilon_exact, c_heuristic, exact_report, ExactOptions};
use framelab::verify::{verify_frame, verify_with_report, VerifyOptions};
use framelab::{Execution, Field, FrameError, FrameMatrix};

fn gallery() -> Vec<GallerySpec> {
    let spec = |family, size, dim, field| GallerySpec {
        family,
        size,
        dim,
        seed: 3,
        field,
    };
    vec![
        spec(Family::Simplex, 5, None, Field::Real),
        spec(Family::SimplexSub, 6, None, Field::Real),
        spec(Family::Shift, 8, None, Field::Real),
        spec(Family::Random, 7, Some(3), Field::Real),
        spec(Family::Random, 6, Some(3), Field::Complex),
        spec(Family::Parseval, 8, Some(4), Field::Complex),
        spec(Family::Orthonormal, 4, None, Field::Real),
    ]
}

#[test]
fn every_gallery_frame_verifies() {
    for spec in gallery() {
        let entry = spec.build().unwrap();
        let report = verify_frame(&entry.frame, &VerifyOptions::default()).unwrap();
        let failed: Vec<_> = report.failures().map(|p| p.name.clone()).collect();
        assert!(report.passed, "{:?}: {failed:?}", spec.family);
        let b = entry.frame.frame_bounds(1e-10).unwrap();
        if let Some(&a) = entry.expected.get("lower_bound") {
            assert!((b.lower - a).abs() < 1e-8, "{:?}", spec.family);
        }
        if let Some(&u) = entry.expected.get("upper_bound") {
            assert!((b.upper - u).abs() < 1e-8, "{:?}", spec.family);
        }
    }
}

#[test]
fn corrupted_report_is_caught() {
    let f = simplex_subframe(5).unwrap();
    let b = f.frame_bounds(1e-10).unwrap();
    let mut r = exact_report(&f, &ExactOptions::default()).unwrap();
    r.c_sigma = 0.9;
    let v = verify_with_report(&f, &r, &b, 0).unwrap();
    assert!(!v.passed);
    assert!(v.failures().any(|p| p.name == "chain_inequalities"));
}

#[test]
fn shift_frame_sign_constant_beats_flip_ratio() {
    let (c, signs) = c_epsilon_exact(&shift_frame(8).unwrap()).unwrap();
    assert!(c >= (68.0f64 / 12.0).sqrt() - 1e-10, "{c}");
    assert_eq!(signs.as_slice()[0], 1);
}

#[test]
fn strategies_give_identical_reports() {
    for spec in gallery() {
        let f = spec.build().unwrap().frame;
        let seq = exact_report(&f, &ExactOptions::sequential()).unwrap();
        let par = exact_report(
            &f,
            &ExactOptions {
                execution: Execution::Parallel,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}

#[test]
fn over_limit_refuses_exact_but_heuristic_runs() {
    let f = simplex_frame(17).unwrap();
    match exact_report(&f, &ExactOptions::default()) {
        Err(FrameError::ExactLimit { count: 17, limit: 16 }) => {}
        other => panic!("{other:?}"),
    }
    let h = c_heuristic(&f, 16, 1).unwrap();
    assert!((h.c_sigma - 1.0).abs() < 1e-9 && (h.c_a - 1.0).abs() < 1e-9);
    assert_eq!(h, c_heuristic(&f, 16, 1).unwrap());
}

#[test]
fn subframe_decomposition_names_an_eigenvector_failure() {
    let d = decompose(&simplex_subframe(6).unwrap(), 1e-8).unwrap();
    let w = d.failure().expect("not an orthogonal sum of tight frames");
    assert_eq!(w.kind, FailureKind::NonEigenvector);
    assert!(matches!(w.index, WitnessIndex::Single(_)));
    assert!(w.residual > 1e-3);
}

#[test]
fn two_tight_blocks_decompose() {
    // e1, e1 (lambda 2) and the simplex of 3 in the span of e2, e3 (lambda 1)
    let s = simplex_frame(3).unwrap();
    let mut rows = vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]];
    // simplex vectors live in a 2-plane of R^3; rotate them into span(e2, e3)
    let basis = s.range_basis(1e-10).unwrap();
    for i in 0..3 {
        let c = basis.coordinates(s.vector(i));
        rows.push(vec![0.0, c[0].re, c[1].re]);
    }
    let f = FrameMatrix::from_real(3, rows).unwrap();
    let d = decompose(&f, 1e-8).unwrap();
    let t = d.tight().expect("two tight blocks");
    let mut groups: Vec<_> = t.groups.iter().map(|g| (g.indices.clone(), g.lambda, g.span_dim)).collect();
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(groups[0].0, vec![0, 1]);
    assert!((groups[0].1 - 2.0).abs() < 1e-10 && groups[0].2 == 1);
    assert_eq!(groups[1].0, vec![2, 3, 4]);
    assert!((groups[1].1 - 1.0).abs() < 1e-10 && groups[1].2 == 2);
    let r = exact_report(&f, &ExactOptions::default()).unwrap();
    assert!((r.c_a - 1.0).abs() < 1e-9);
}

#[test]
fn self_multiplier_with_unit_symbol_is_the_frame_operator() {
    let f = shift_frame(5).unwrap();
    let r = multiplier_report(&MultiplierSpec::self_multiplier(&f, &[1.0; 5]).unwrap()).unwrap();
    let s = f.frame_operator();
    for (i, row) in r.matrix.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            assert!((z[0] - s[(i, j)].re).abs() < 1e-14 && z[1] == 0.0);
        }
    }
    assert!((r.relative_norm.unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn csv_and_json_inputs_agree() {
    let csv = "a,b,c\n1,0,1\n0,1,1\n";
    let json = r#"{"field":"real","dim":2,"vectors":[[1,0],[0,1],[1,1]],"labels":["a","b","c"]}"#;
    let from_csv = frame_from_csv(csv).unwrap();
    let from_json = frame_from_json(json).unwrap();
    assert_eq!(from_csv, from_json);
    assert_eq!(from_csv.dim(), 2);
    assert_eq!(from_csv.count(), 3);
}

#[test]
fn malformed_inputs_report_positions() {
    match frame_from_csv("1,0\n0,x\n") {
        Err(FrameError::Parse { line: 2, column: 2, .. }) => {}
        other => panic!("{other:?}"),
    }
    assert!(frame_from_json("{\"field\": \"real\", \"dim\": 2,\n \"vectors\": [[1, 0], [0]]}").is_err());
    assert!(frame_from_json("{\"dim\": 2, \"vectors\": [[0, 0]]}").is_err());
}
