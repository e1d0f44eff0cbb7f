mod support;

use bestpath_core::dataset::{Column, Dataset};
use bestpath_core::dist::t_two_sided_p;
use bestpath_core::linalg::{least_squares, Matrix};
use bestpath_core::linmodel::{design_matrix, ols_fit};
use rand::Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};
use support::*;

fn with_intercept(x: &Matrix) -> Matrix {
    let mut cols = vec![vec![1.0; x.rows()]];
    cols.extend((0..x.cols()).map(|j| x.column(j)));
    Matrix::from_columns(&cols)
}

#[test]
fn coefficients_match_pseudo_inverse() {
    let mut r = rng(30);
    for _ in 0..100 {
        let n = r.gen_range(8..60);
        let p = r.gen_range(1..n.min(8));
        let x = with_intercept(&random_matrix(&mut r, n, p));
        let y = normals(&mut r, n);
        let ls = least_squares(&x, &y).unwrap();
        let oracle = pinv_solve(&x, &y);
        for (a, b) in ls.coefficients.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
        }
        for j in 0..x.cols() {
            let xtr: f64 = x.column(j).iter().zip(&ls.residuals).map(|(a, b)| a * b).sum();
            assert!(xtr.abs() < 1e-9, "residuals not orthogonal to column {j}");
        }
        let rss: f64 = ls.residuals.iter().map(|e| e * e).sum();
        assert!((rss - ls.rss).abs() < 1e-9 * (1.0 + rss));
    }
}

#[test]
fn standard_errors_match_normal_equations() {
    let mut r = rng(31);
    let (n, p) = (40, 4);
    let x = with_intercept(&random_matrix(&mut r, n, p));
    let y = normals(&mut r, n);
    let ls = least_squares(&x, &y).unwrap();
    let xm = to_nalgebra(&x);
    let inv = (xm.transpose() * &xm).try_inverse().unwrap();
    for (j, v) in ls.unscaled_variances().iter().enumerate() {
        assert!((v - inv[(j, j)]).abs() < 1e-10 * inv[(j, j)].abs().max(1.0));
    }
}

#[test]
fn rss_never_increases_with_more_regressors() {
    let mut r = rng(32);
    for _ in 0..50 {
        let n = 30;
        let cols = normals(&mut r, n * 6);
        let y = normals(&mut r, n);
        let mut names = vec!["y".to_string()];
        let mut columns = vec![Column::Continuous(y)];
        for j in 0..6 {
            names.push(format!("x{j}"));
            columns.push(Column::Continuous(cols[j * n..(j + 1) * n].to_vec()));
        }
        let ds = Dataset::new(names, columns).unwrap();
        let mut last = f64::INFINITY;
        for k in 0..=6 {
            let regs: Vec<String> = (0..k).map(|j| format!("x{j}")).collect();
            let fit = ols_fit(&design_matrix(&ds, "y", &regs).unwrap()).unwrap();
            assert!(fit.rss <= last + 1e-9);
            assert!((fit.r2_adjusted - (1.0 - fit.mse * fit.c())).abs() < 1e-12);
            last = fit.rss;
        }
    }
}

#[test]
fn t_tail_matches_statrs() {
    for dof in [1.0, 2.0, 5.0, 13.0, 30.0, 256.0, 1000.0] {
        let t = StudentsT::new(0.0, 1.0, dof).unwrap();
        for x in [0.0, 0.1, 0.5, 1.0, 1.96, 2.5, 4.0, 8.0, -3.0] {
            let expected = 2.0 * (1.0 - t.cdf(f64::abs(x)));
            let got = t_two_sided_p(x, dof);
            assert!((got - expected).abs() < 1e-10, "dof {dof} t {x}: {got} vs {expected}");
        }
    }
}

#[test]
fn dummy_coding_matches_group_means() {
    let g = Column::discrete_from_labels(&["a", "b", "c", "a", "b", "c", "a", "b"]);
    let y = vec![1.0, 4.0, 7.0, 3.0, 6.0, 9.0, 2.0, 5.0];
    let ds = Dataset::new(vec!["y".into(), "g".into()], vec![Column::Continuous(y), g]).unwrap();
    let fit = ols_fit(&design_matrix(&ds, "y", &["g"]).unwrap()).unwrap();
    let est = fit.estimates();
    assert!((est[0] - 2.0).abs() < 1e-12);
    assert!((est[1] - 3.0).abs() < 1e-12);
    assert!((est[2] - 6.0).abs() < 1e-12);
}
