// scratch probe
use pa_mincsp::format::parse_instance;
use pa_mincsp::pipeline::{compress_step, solve, SolveOptions};
use pa_mincsp::oracle::brute_force_mincsp;

fn main() {
    let text = "k 3\neq v4 v3 soft 2\nneq v4 v0 soft 1\nneq v4 v2 soft 3\nlt v1 v4 soft 1\nlt v2 v1 soft 3\nlt v1 v2 soft 1\nlt v3 v1 soft 4\nlt v0 v4 crisp\n";
    let inst = parse_instance(text).unwrap();
    let (o, _) = brute_force_mincsp(&inst).unwrap().unwrap();
    println!("oracle: cost={} weight={} deleted={:?}", o.cost, o.weight, o.deleted);
    let (p, _) = solve(&inst).unwrap().unwrap();
    println!("pipeline: cost={} weight={} deleted={:?}", p.cost, p.weight, p.deleted);
    // Direct compression with the carry the driver would have at the end.
    let cs = compress_step(&inst, &[5, 6], &SolveOptions::default()).unwrap();
    if let Some((s, _)) = cs {
        println!("compress_step([5,6]): cost={} weight={} deleted={:?}", s.cost, s.weight, s.deleted);
    }
}
