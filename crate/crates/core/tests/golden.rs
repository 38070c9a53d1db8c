use cdforge::twistlab::render::{parse_csv_cell, render_csv, render_pretty, render_sign_grid, GammaMode};
use cdforge::AlgebraSignature;

const GENERALIZED: &str = include_str!("golden/generalized_quaternion.txt");
const DIVISION: &str = include_str!("golden/division_quaternion.txt");
const TWIST: &str = include_str!("golden/quaternion_twist.txt");
const COMPLEX_CSV: &str = include_str!("golden/complex.csv");

#[test]
fn generalized_quaternion_table() {
    let mode = GammaMode::parse("g1,g2").unwrap();
    assert_eq!(render_pretty(&mode).unwrap(), GENERALIZED);
}

#[test]
fn division_quaternion_table() {
    let mode = GammaMode::Numeric(AlgebraSignature::from_ints(&[-1, -1]).unwrap());
    assert_eq!(render_pretty(&mode).unwrap(), DIVISION);
}

#[test]
fn quaternion_twist_grid() {
    assert_eq!(render_sign_grid(2).unwrap(), TWIST);
}

#[test]
fn complex_csv() {
    let mode = GammaMode::Numeric(AlgebraSignature::from_ints(&[-1]).unwrap());
    assert_eq!(render_csv(&mode).unwrap(), COMPLEX_CSV);
}

#[test]
fn symbolic_csv_cells_follow_the_grammar() {
    let mode = GammaMode::parse("g1,g2,g3").unwrap();
    let csv = render_csv(&mode).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), ",e0,e1,e2,e3,e4,e5,e6,e7");
    for (p, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0], format!("e{p}"));
        for (q, cell) in cells[1..].iter().enumerate() {
            let parsed = parse_csv_cell(cell).unwrap();
            assert_eq!(parsed.index, p ^ q, "{cell}");
        }
    }
    assert!(csv.contains("-g1*g2*e0"));
}

#[test]
fn numeric_tables_fold_gammas_into_magnitudes() {
    let mode = GammaMode::parse("4,-9/2").unwrap();
    let csv = render_csv(&mode).unwrap();
    // e₁e₁ = 4, e₃e₃ = −γ₁γ₂ = 18, e₂e₃ = −γ₂e₁ = 9/2 e₁
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[2][2], "4*e0");
    assert_eq!(rows[4][4], "18*e0");
    assert_eq!(rows[3][4], "9/2*e1");
}
