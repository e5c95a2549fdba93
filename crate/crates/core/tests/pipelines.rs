use std::collections::BTreeSet;

use charcom::catalog::named_group;
use charcom::chartable::character_table;
use charcom::circuit::{gate_set_generators, GateKind};
use charcom::complexity::{complexity_profile, max_radius};
use charcom::emit::{from_json, to_json, write_all, Dataset};
use charcom::experiments::{
    bin_index, complexity_heatmap, complexity_histogram, hypersphere_cloud, scaling_curve, ComplexitySource, Family,
    HeatmapGrid, HistogramData, HostGroup, HypersphereCloud, ScalingSeries,
};
use charcom::group::{close_group, ClosureOptions, DEFAULT_ORDER_CAP};
use charcom::Error;

const CAP: usize = DEFAULT_ORDER_CAP;

fn xz() -> Family {
    Family::Random(vec![GateKind::X, GateKind::Z])
}

fn class_values(set: &[GateKind], n: usize) -> Vec<f64> {
    let g = close_group(&gate_set_generators(set, n).unwrap(), ClosureOptions::default()).unwrap();
    let t = character_table(&g).unwrap();
    complexity_profile(&g, &t).per_class
}

#[test]
fn xz_histogram_sits_on_two_values() {
    let values = class_values(&[GateKind::X, GateKind::Z], 1);
    let allowed: BTreeSet<usize> = values.iter().map(|&v| bin_index(v, 30)).collect();
    assert_eq!(allowed, BTreeSet::from([bin_index(0.5, 30), bin_index(0.75, 30)]));
    for m in [1, 2, 7] {
        let h = complexity_histogram(&xz(), 1, m, 100, 30, 3, CAP).unwrap();
        assert_eq!(h.counts.iter().sum::<usize>(), 100);
        for (i, &count) in h.counts.iter().enumerate() {
            assert!(count == 0 || allowed.contains(&i), "bin {i}");
        }
    }
}

#[test]
fn histogram_is_reproducible() {
    let fam = Family::Qaoa { max_level: 1 };
    let a = complexity_histogram(&fam, 2, 12, 50, 20, 9, CAP).unwrap();
    let b = complexity_histogram(&fam, 2, 12, 50, 20, 9, CAP).unwrap();
    assert_eq!(a, b);
    assert!(a.bin_edges.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(a.to_svg(), b.to_svg());
}

#[test]
fn golden_pauli1_histogram() {
    let fam = Family::Random(vec![GateKind::X, GateKind::Y, GateKind::Z]);
    let h = complexity_histogram(&fam, 1, 10, 200, 30, 42, CAP).unwrap();
    assert_eq!(h.to_csv(), include_str!("golden/pauli1_hist_seed42.csv"));
    assert_eq!(h.to_svg(), include_str!("golden/pauli1_hist_seed42.svg"));
}

#[test]
fn heatmap_zero_gates_is_identity_complexity() {
    let fam = Family::Random(vec![GateKind::X, GateKind::Z, GateKind::Cnot]);
    let grid = complexity_heatmap(&[1, 2], &[0, 3, 6], &fam, 4, 11, CAP).unwrap();
    for (qi, &n) in grid.qubit_values.iter().enumerate() {
        let host = HostGroup::new(&fam, n, CAP).unwrap();
        assert!((grid.cells[qi][0].unwrap() - host.identity_complexity()).abs() < 1e-12);
    }
    let again = complexity_heatmap(&[1, 2], &[0, 3, 6], &fam, 4, 11, CAP).unwrap();
    assert_eq!(grid, again);
}

#[test]
fn single_sample_cells_are_class_values() {
    let values = class_values(&[GateKind::X, GateKind::Z], 1);
    let grid = complexity_heatmap(&[1], &[1, 2, 3, 4, 5], &xz(), 1, 5, CAP).unwrap();
    for cell in &grid.cells[0] {
        let v = cell.unwrap();
        assert!(values.iter().any(|&c| (c - v).abs() < 1e-12));
    }
}

#[test]
fn scaling_means_lie_in_the_class_value_set() {
    let set = [GateKind::X, GateKind::Z, GateKind::Cnot];
    let values = class_values(&set, 2);
    let fam = Family::Random(set.to_vec());
    let s = scaling_curve(&fam, 2, &[5, 0, 10, 5], 1, 42, CAP).unwrap();
    assert_eq!(s.gate_counts, vec![0, 5, 10]);
    assert_eq!(s.stderr, vec![0.0; 3]);
    for &m in &s.mean_complexity {
        assert!(values.iter().any(|&c| (c - m).abs() < 1e-12));
    }
}

#[test]
fn scaling_zero_gates() {
    let fam = Family::Qaoa { max_level: 1 };
    let host = HostGroup::new(&fam, 2, CAP).unwrap();
    let s = scaling_curve(&fam, 2, &[0], 16, 1, CAP).unwrap();
    assert!((s.mean_complexity[0] - host.identity_complexity()).abs() < 1e-12);
    assert_eq!(s.stderr[0], 0.0);
}

#[test]
fn doubling_samples_keeps_the_first_half() {
    let fam = Family::Random(vec![GateKind::X, GateKind::Z, GateKind::Cnot]);
    let host = HostGroup::new(&fam, 2, CAP).unwrap();
    let draw = |s: u64| {
        let seed = charcom::rng::sub_seed(8, &[2, 6, s]);
        host.complexity_of(&fam.sample(2, 6, seed).unwrap()).unwrap()
    };
    let first: Vec<f64> = (0..10).map(draw).collect();
    let small = scaling_curve(&fam, 2, &[6], 10, 8, CAP).unwrap();
    let big = scaling_curve(&fam, 2, &[6], 20, 8, CAP).unwrap();
    let mean10 = charcom::experiments::mean_and_stderr(&first).unwrap().0;
    assert!((small.mean_complexity[0] - mean10).abs() < 1e-15);
    assert_ne!(small.stderr[0], big.stderr[0]);
}

#[test]
fn cloud_points_sit_on_their_spheres() {
    let cloud = hypersphere_cloud(10, 500, 42, &ComplexitySource::Uniform01).unwrap();
    assert_eq!(cloud.points.len(), 500);
    for p in &cloud.points {
        assert!((p.x * p.x + p.y * p.y + p.z * p.z - p.radius * p.radius).abs() < 1e-9);
        assert!(p.radius <= (1023.0f64 / 1024.0).sqrt());
        assert!((0.0..1.0).contains(&p.complexity));
    }
    let src = ComplexitySource::Circuit {
        family: xz(),
        gate_count: 4,
        order_cap: CAP,
    };
    let c = hypersphere_cloud(1, 50, 42, &src).unwrap();
    assert!(c.points.iter().all(|p| p.radius <= max_radius(1) && p.complexity >= 0.0));
    assert_eq!(c, hypersphere_cloud(1, 50, 42, &src).unwrap());
}

#[test]
fn abelian_host_gives_unit_complexity_points() {
    let src = ComplexitySource::Circuit {
        family: Family::Random(vec![GateKind::I]),
        gate_count: 0,
        order_cap: CAP,
    };
    let cloud = hypersphere_cloud(3, 5, 1, &src).unwrap();
    assert!(cloud.points.iter().all(|p| (p.complexity - 1.0).abs() < 1e-12));
    assert_eq!(charcom::complexity::hypersphere_radius(3, 0.0).unwrap(), 0.0);
}

#[test]
fn unclosable_gate_set_is_reported() {
    let fam = Family::Random(vec![GateKind::H, GateKind::T(3)]);
    assert!(matches!(
        complexity_histogram(&fam, 1, 3, 5, 10, 1, CAP),
        Err(Error::GroupNotClosed { cap: CAP })
    ));
}

#[test]
fn json_round_trips() {
    let h = complexity_histogram(&xz(), 1, 3, 20, 10, 1, CAP).unwrap();
    assert_eq!(from_json::<HistogramData>(&to_json(&h).unwrap()).unwrap(), h);
    let fam = Family::Qft { max_level: 2 };
    let grid = complexity_heatmap(&[1, 2], &[0, 2], &fam, 2, 1, CAP).unwrap();
    assert_eq!(from_json::<HeatmapGrid>(&to_json(&grid).unwrap()).unwrap(), grid);
    let s = scaling_curve(&xz(), 1, &[0, 1, 2], 5, 1, CAP).unwrap();
    assert_eq!(from_json::<ScalingSeries>(&to_json(&s).unwrap()).unwrap(), s);
    let c = hypersphere_cloud(4, 30, 1, &ComplexitySource::Uniform01).unwrap();
    assert_eq!(from_json::<HypersphereCloud>(&to_json(&c).unwrap()).unwrap(), c);
}

#[test]
fn csv_schemas() {
    let fam = Family::Qft { max_level: 2 };
    let grid = complexity_heatmap(&[1, 2], &[0, 2], &fam, 2, 1, CAP).unwrap();
    let csv = grid.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,gates,mean_complexity,samples");
    assert_eq!(lines[1], "1,0,1,2");
    assert_eq!(lines[3], "2,0,,0");
    let s = scaling_curve(&xz(), 1, &[0], 3, 1, CAP).unwrap();
    assert_eq!(s.to_csv(), "gates,mean,stderr\n0,0.75,0\n");
    let c = hypersphere_cloud(2, 1, 1, &ComplexitySource::Uniform01).unwrap();
    assert!(c.to_csv().starts_with("x,y,z,radius,complexity\n"));
}

fn well_formed(svg: &str) -> bool {
    svg.starts_with("<?xml")
        && svg.ends_with("</svg>\n")
        && svg.matches('<').count() == svg.matches('>').count()
        && !svg.contains("href")
}

#[test]
fn svg_outputs_are_self_contained() {
    let empty = complexity_histogram(&xz(), 1, 3, 0, 10, 1, CAP).unwrap();
    let svg = empty.to_svg();
    assert!(well_formed(&svg));
    assert!(!svg.contains("fill=\"#4"), "no bars expected");
    let grid = complexity_heatmap(&[1, 2], &[0, 2], &Family::Qft { max_level: 2 }, 2, 1, CAP).unwrap();
    assert!(well_formed(&grid.to_svg()));
    assert!(grid.to_svg().contains("#cccccc"));
    let s = scaling_curve(&xz(), 1, &[0, 4], 3, 1, CAP).unwrap();
    assert!(well_formed(&s.to_svg()));
    let c = hypersphere_cloud(2, 10, 1, &ComplexitySource::Uniform01).unwrap();
    assert!(well_formed(&c.to_svg()));
}

#[test]
fn files_are_written_where_asked() {
    let dir = tempfile::tempdir().unwrap();
    let s = scaling_curve(&xz(), 1, &[0, 2], 3, 1, CAP).unwrap();
    let paths = write_all(&s, dir.path(), "scaling").unwrap();
    assert_eq!(paths.len(), 3);
    for p in paths {
        assert!(p.starts_with(dir.path()));
        assert!(std::fs::metadata(p).unwrap().len() > 0);
    }
}

#[test]
fn named_group_matches_family_host() {
    let host = HostGroup::new(&Family::Random(vec![GateKind::X, GateKind::Y, GateKind::Z]), 1, CAP).unwrap();
    let pauli = named_group("pauli1", ClosureOptions::default()).unwrap();
    assert_eq!(host.group.order(), pauli.order());
}
