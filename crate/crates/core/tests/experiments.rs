mod common;

use common::{catalog, dims};
use lapsep::constructions::construct_entangling_labeling;
use lapsep::entanglement::degree_entangled;
use lapsep::experiments::{
    bipartite_census, canonical_code, census_n4, noncomplete_experiment, ExperimentOptions,
    ReportLine,
};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn catalogs_hold_distinct_classes() {
    let six = catalog("all6.g6");
    assert_eq!(six.len(), 156);
    let mut codes: Vec<u128> = six.iter().map(|(_, g)| canonical_code(g)).collect();
    codes.sort_unstable();
    codes.dedup();
    assert_eq!(codes.len(), 156);

    let nine = catalog("regular4_9.g6");
    assert_eq!(nine.len(), 16);
    assert!(nine.iter().all(|(_, g)| g.min_degree() == 4.0 && g.max_degree() == 4.0));
}

#[test]
fn constructions_and_search_agree_on_six_vertices() {
    let six = catalog("all6.g6");
    let d = dims(&[2, 3]);
    let opts = ExperimentOptions { always_search: true };
    let lines = noncomplete_experiment(&six, &d, opts).unwrap();
    for ((code, g), line) in six.iter().zip(&lines) {
        if g.is_trivial() || g.is_complete() {
            assert_eq!(line.classification, "skipped");
            continue;
        }
        let constructed = construct_entangling_labeling(g, &d);
        assert!(constructed.is_some(), "{code}: no construction applies");
        let (_, _, lab) = constructed.unwrap();
        assert!(degree_entangled(g, &lab).unwrap());
        assert_eq!(line.classification, "entangling_labeling_found", "{code}");
    }
}

#[test]
fn every_noncomplete_graph_with_a_qubit_factor_is_constructed() {
    use lapsep::constructions::entangling_labeling_general;
    let d = dims(&[2, 3]);
    for (code, g) in catalog("all6.g6") {
        if g.is_trivial() || g.is_complete() {
            continue;
        }
        let ok = entangling_labeling_general(&g, &d, 0).is_ok()
            || lapsep::constructions::entangling_labeling_max_degree(&g, &d, 0).is_ok();
        assert!(ok, "{code}");
    }
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let nine = catalog("regular4_9.g6");
    let d = dims(&[3, 3]);
    let run = |threads| {
        in_pool(threads, || {
            noncomplete_experiment(&nine[..6], &d, ExperimentOptions::default()).unwrap()
        })
    };
    assert_eq!(run(1), run(4));
    assert_eq!(in_pool(1, census_n4).unwrap(), in_pool(3, census_n4).unwrap());
}

#[test]
fn report_lines_round_trip_through_json() {
    let lines = bipartite_census(&dims(&[2, 3])).unwrap();
    assert_eq!(lines.len(), 6);
    for line in &lines {
        let text = serde_json::to_string(line).unwrap();
        let back: ReportLine = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, line);
    }
    let classes: Vec<&str> = lines.iter().map(|l| l.classification.as_str()).collect();
    assert_eq!(classes[..2], ["all_entangled", "all_entangled"]);
}

#[test]
fn census_separable_classes_are_k4_matching_and_square() {
    use lapsep::io::from_graph6;
    use lapsep::Graph;
    let report = census_n4().unwrap();
    let sep: Vec<u128> = report
        .all_separable()
        .iter()
        .map(|l| canonical_code(&from_graph6(&l.graph6).unwrap()))
        .collect();
    let expected = [
        Graph::complete(4),
        Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap(),
        Graph::cycle(4),
    ];
    for g in expected {
        assert!(sep.contains(&canonical_code(&g)));
    }
}
