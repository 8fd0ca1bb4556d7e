use dihedral_core::acceptance::{run_all, CRITERIA};

#[test]
fn acceptance_suite() {
    let outcomes = run_all(false);
    assert_eq!(outcomes.len(), CRITERIA.len());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.line()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
