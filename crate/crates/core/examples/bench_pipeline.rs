use simple_homotopy::graphs::Graph;
use simple_homotopy::morse::pipeline::hom_to_neighborhood;
use simple_homotopy::homology::{homology, homology_equal};
use simple_homotopy::sampling::{rng_from_seed, random_connected_graph};
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
    let hom_time = t3.elapsed();
    println!(
        "{name}: edges={} steps={} start_faces={} build={:?} verify={:?} homology={:?}",
        g.edge_count(),
        result.certificate.steps.len(),
        result.certificate.start.len(),
        built, verified, hom_time
    );
}

fn main() {
    run("K3", &Graph::complete(3));
    run("K4", &Graph::complete(4));
    run("C6", &Graph::cycle(6));
    run("P4", &Graph::path(4));
    let mut rng = rng_from_seed(1);
    for i in 0..8 {
        let g = random_connected_graph(&mut rng, 3, 6);
        run(&format!("rand{i}"), &g);
    }
}
