mod common;

#[test]
fn connected_cubic_counts() {
    let levels = common::connected_cubic_graphs(12);
    let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
    assert_eq!(counts, vec![1, 2, 5, 19, 85]);
    for g in levels.iter().flatten() {
        assert!(g.is_connected());
        let mut deg = vec![0; g.v];
        for &(a, b) in &g.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        assert!(deg.iter().all(|&d| d == 3));
    }
}

#[test]
fn all_cubic_counts() {
    let graphs = common::all_cubic_graphs(12);
    let by_v: Vec<usize> = (4..=12).step_by(2).map(|v| graphs.iter().filter(|g| g.v == v).count()).collect();
    assert_eq!(by_v, vec![1, 2, 6, 21, 94]);
}
