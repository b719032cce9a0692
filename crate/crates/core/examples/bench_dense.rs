use simple_homotopy::graphs::Graph;
use simple_homotopy::label::Label;
use simple_homotopy::morse::pipeline::hom_to_neighborhood;
use simple_homotopy::homology::{homology, homology_equal};
use std::time::Instant;

fn run(name: &str, g: &Graph) {
    let t = Instant::now();
    let result = hom_to_neighborhood(g).unwrap();
    let built = t.elapsed();
    let t2 = Instant::now();
    result.certificate.verify().unwrap();
    let verified = t2.elapsed();
    let t3 = Instant::now();
    let h0 = homology(&result.certificate.start).unwrap();
    let h1 = homology(&result.certificate.end).unwrap();
    assert!(homology_equal(&h0, &h1));
    println!(
        "{name}: edges={} steps={} start={} build={:?} verify={:?} hom={:?}",
        g.edge_count(), result.certificate.steps.len(), result.certificate.start.len(),
        built, verified, t3.elapsed()
    );
}

fn minus(n: usize, remove: &[(usize, usize)]) -> Graph {
    let labels: Vec<Label> = (1..=n).map(|i| Label::atom(i.to_string())).collect();
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if !remove.contains(&(i, j)) {
                edges.push((Label::atom(i.to_string()), Label::atom(j.to_string())));
            }
        }
    }
    Graph::new(labels, &edges).unwrap()
}

fn main() {
    run("K6-3", &minus(6, &[(1, 2), (3, 4), (5, 6)]));
    run("K6-2", &minus(6, &[(1, 2), (3, 4)]));
    run("K6-1", &minus(6, &[(1, 2)]));
    run("K6", &Graph::complete(6));
}
