//! Published partition layouts reproduced from synthetic scores with the same counts.

use lexdiv_core::partition::{partition, partition_fixed};
use lexdiv_core::OverlapScore;

/// `count` scores spread evenly over `[lo, hi)`.
fn spread(out: &mut Vec<OverlapScore>, lo: f64, hi: f64, count: usize) {
    for i in 0..count {
        let percent = lo + (hi - lo) * (i as f64 + 0.5) / count as f64;
        out.push(OverlapScore {
            sample_id: format!("s{}", out.len()),
            percent,
            distinct_ngrams: 20,
            matched: 0,
            degenerate: false,
        });
    }
}

fn layout(set: &lexdiv_core::PartitionSet) -> Vec<(String, usize)> {
    set.bins.iter().map(|b| (b.label(), b.len())).collect()
}

#[test]
fn xsum_layout_from_greedy_rule() {
    let five_wide = [690, 826, 961, 1048, 1159, 1216, 1029, 863, 888];
    let mut scores = Vec::new();
    for (i, c) in five_wide.iter().enumerate() {
        spread(&mut scores, 5.0 * i as f64, 5.0 * (i + 1) as f64, *c);
    }
    spread(&mut scores, 45.0, 50.0, 500);
    spread(&mut scores, 50.0, 55.0, 652);
    for lo in [55.0, 60.0, 65.0] {
        spread(&mut scores, lo, lo + 5.0, 227);
    }
    spread(&mut scores, 85.0, 100.0, 818);
    spread(&mut scores, 100.0, 100.0, 1);
    assert_eq!(scores.len(), 11332);

    let set = partition(&scores, 600).unwrap();
    let expected = [
        ("0-5", 690),
        ("5-10", 826),
        ("10-15", 961),
        ("15-20", 1048),
        ("20-25", 1159),
        ("25-30", 1216),
        ("30-35", 1029),
        ("35-40", 863),
        ("40-45", 888),
        ("45-55", 1152),
        ("55-70", 681),
        (">70", 819),
    ];
    let expected: Vec<(String, usize)> = expected.iter().map(|(l, c)| (l.to_string(), *c)).collect();
    assert_eq!(layout(&set), expected);
}

#[test]
fn samsum_layout() {
    let mut scores = Vec::new();
    spread(&mut scores, 0.0, 5.0, 286);
    spread(&mut scores, 5.0, 15.0, 246);
    spread(&mut scores, 15.0, 60.0, 287);
    let fixed = partition_fixed(&scores, &[0.0, 5.0, 15.0]).unwrap();
    let expected: Vec<(String, usize)> =
        [("0-5", 286), ("5-15", 246), (">15", 287)].iter().map(|(l, c)| (l.to_string(), *c)).collect();
    assert_eq!(layout(&fixed), expected);
}

#[test]
fn thirty_uniform_scores() {
    let mut scores = Vec::new();
    spread(&mut scores, 0.0, 100.0, 30);
    let set = partition(&scores, 10).unwrap();
    // scores sit at 1.67, 5, 8.33, ...; 10 fall below 35, 11 more below 70, and the last 9 merge back
    let expected: Vec<(String, usize)> = vec![("0-35".into(), 10), (">35".into(), 20)];
    assert_eq!(layout(&set), expected);
    // brute force: every sample lies in exactly the bin whose range contains it
    for (i, bin) in set.bins.iter().enumerate() {
        assert!(bin.len() >= 10);
        let width = bin.upper.unwrap_or(100.0) - bin.lower;
        assert!(width > 0.0 && width % 5.0 == 0.0);
        for s in &scores {
            let inside = s.percent >= bin.lower && bin.upper.is_none_or(|u| s.percent < u);
            assert_eq!(inside, bin.sample_ids.contains(&s.sample_id), "bin {i}, {}", s.percent);
        }
    }
}
