//! Solves CNF satisfiability through a first-visits traversal instance.
//!
//! Each variable becomes a chooser vertex forking into a 0-branch and a
//! 1-branch, each clause a chooser fanning out over its literals, and the
//! order constraints demand that a clause vertex is entered only after the
//! branch satisfying it. A path witness therefore embeds an assignment,
//! which is read off the first visited branch per variable.

use traversync::reductions::{
    cnf_to_fvt, pullback_witness, CnfFormula, GeneratedInstance, GeneratedWitness, SourceWitness,
};
use traversync::travgraph::solve_fvt;

fn main() {
    let text = "c two equivalent variables\np cnf 2 2\n-1 2 0\n1 -2 0\n";
    let cnf = CnfFormula::parse_dimacs(text).unwrap();
    println!("formula: {}", render(&cnf));

    let out = cnf_to_fvt(&cnf).unwrap();
    let GeneratedInstance::Traversal(inst) = &out.instance else {
        unreachable!("the satisfiability route generates a traversal instance");
    };
    println!(
        "traversal instance: {} vertices, {} order pairs, {} must-visit",
        inst.g.n_vertices(),
        inst.pairs.len(),
        inst.must_visit.len()
    );
    for &(u, v) in &inst.pairs {
        println!(
            "  visit {} before first reaching {}",
            inst.g.vertex_name(u),
            inst.g.vertex_name(v)
        );
    }

    let verdict = solve_fvt(inst);
    let Some(path) = verdict.witness() else {
        println!("no admissible path, formula unsatisfiable");
        return;
    };
    let names: Vec<&str> = path.iter().map(|&v| inst.g.vertex_name(v)).collect();
    println!("witness path: {}", names.join(" "));

    let pulled = pullback_witness(&out, &GeneratedWitness::Path(path.to_vec())).unwrap();
    let SourceWitness::Assignment(assignment) = pulled else {
        unreachable!("satisfiability witnesses pull back to assignments");
    };
    let rendered: Vec<String> = assignment
        .iter()
        .enumerate()
        .map(|(i, &b)| format!("x{}={}", i + 1, u8::from(b)))
        .collect();
    println!("assignment: {}", rendered.join(" "));
    assert!(cnf.satisfied_by(&assignment));
}

fn render(cnf: &CnfFormula) -> String {
    let clauses: Vec<String> = cnf
        .clauses()
        .iter()
        .map(|clause| {
            let lits: Vec<String> = clause
                .iter()
                .map(|&l| {
                    if l < 0 {
                        format!("!x{}", -l)
                    } else {
                        format!("x{l}")
                    }
                })
                .collect();
            format!("({})", lits.join(" | "))
        })
        .collect();
    clauses.join(" & ")
}
