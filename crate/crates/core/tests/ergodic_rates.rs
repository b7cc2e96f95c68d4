use farey_laurent::algebra::Field;
use farey_laurent::ergodic::*;
use farey_laurent::farey_algebraic::HParam;
use farey_laurent::laurent::Element;

/// P(deg A_1 = d) for Haar on L, by counting coefficient patterns of
/// degrees -1..-depth: deg A_1 = d iff the first nonzero coefficient sits
/// at degree -d.
fn degree_law_by_counting(q: u32, depth: u32) -> Vec<f64> {
    let total = q.pow(depth) as usize;
    let mut counts = vec![0usize; depth as usize + 1];
    for i in 0..total {
        let digits: Vec<u32> = (0..depth).map(|j| (i / q.pow(depth - 1 - j) as usize) as u32 % q).collect();
        if let Some(pos) = digits.iter().position(|&c| c != 0) {
            counts[pos + 1] += 1;
        }
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

#[test]
fn degree_histogram_is_geometric() {
    for q in [2u32, 3] {
        let f = Field::prime(q).unwrap();
        let cfg = ExperimentConfig::new(f, MapKind::Artin, 300, 100, 3);
        let r = degree_stats(&cfg).unwrap();
        assert_eq!(r.dropped, 0);
        let n: u64 = r.histogram.iter().sum();
        let law = degree_law_by_counting(q, 4);
        for d in 1..=4 {
            let p = law[d];
            let got = r.histogram[d] as f64;
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((got - n as f64 * p).abs() < 5.0 * sd, "q={q} d={d}: {got} vs {}", n as f64 * p);
        }
        assert!((r.checkpoints.last().unwrap().mean_cumulative - r.target).abs() < 0.1);
    }
}

#[test]
fn next_degree_over_k_shrinks() {
    let f = Field::prime(2).unwrap();
    let r = degree_stats(&ExperimentConfig::new(f, MapKind::Artin, 200, 200, 9)).unwrap();
    let next: Vec<f64> = r.checkpoints.iter().map(|c| c.mean_next).collect();
    assert!(next.windows(2).all(|w| w[1] < w[0]), "{next:?}");
}

#[test]
fn haar_cylinder_frequencies() {
    // Depth-3 cylinders of L are hit with probability q^-3 each.
    let f = Field::prime(3).unwrap();
    let n = 100_000u64;
    let mut counts = vec![0u64; 27];
    for id in 0..n {
        let x = sample_haar(&f, HaarDomain::L, -6, &mut rng_for(1, id));
        let idx = (1..=3).fold(0, |acc, d| acc * 3 + x.coeff(-d).unwrap().index() as usize);
        counts[idx] += 1;
    }
    let e = n as f64 / 27.0;
    let sd = (e * (1.0 - 1.0 / 27.0)).sqrt();
    for c in counts {
        assert!((c as f64 - e).abs() < 4.0 * sd);
    }
}

#[test]
fn rate_samples_obey_the_law_for_several_h() {
    for (q, h) in [(2, "series:0,1,1"), (3, "series:0,2,0,1"), (5, "series:0,3")] {
        let f = Field::prime(q).unwrap();
        let h = HParam::parse(&f, h).unwrap();
        let cfg = ExperimentConfig::new(f.clone(), MapKind::Alg(h), 60, 120, 4);
        let r = rate_experiment(&cfg).unwrap();
        assert_eq!(r.used, 60);
        assert!((r.mean - r.target).abs() < 0.15, "q={q}: {} vs {}", r.mean, r.target);
    }
}

#[test]
fn artin_rate_matches_its_target() {
    let f = Field::prime(2).unwrap();
    let r = rate_experiment(&ExperimentConfig::new(f, MapKind::Artin, 100, 100, 2)).unwrap();
    assert_eq!(r.used, 100);
    assert!((r.mean - r.target).abs() < 0.15, "{} vs {}", r.mean, r.target);
}

#[test]
fn csv_and_summary_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rate.csv");
    let f = Field::prime(2).unwrap();
    let mut cfg = ExperimentConfig::new(f.clone(), MapKind::Alg(HParam::t_inv(&f)), 20, 40, 1);
    cfg.out = Some(path.clone());
    let r = rate_experiment(&cfg).unwrap();
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "sample_id,q,map,ell,rate,terminated,dropped");
    assert_eq!(lines.count(), 20);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rate.csv.json")).unwrap()).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["summary"]["run_hash"], r.run_hash.as_str());
    assert_eq!(json["summary"]["config"]["seed"], 1);
}

#[test]
fn rational_input_is_flagged_terminated() {
    let f = Field::prime(3).unwrap();
    let x = Element::Exact(farey_laurent::laurent::RationalFunction::parse(&f, "(t+1)/(t^4+2*t+1)").unwrap());
    let r = rate_of(&x, &MapKind::Alg(HParam::t_inv(&f)), 50, 0).unwrap();
    assert!(r.terminated);
}
