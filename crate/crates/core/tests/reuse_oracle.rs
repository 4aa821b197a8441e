//! Incremental reuse statistics against a brute-force recount over the
//! latest saved document of every project.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use studio_core::catalog::{placement_counts, ReuseStats, Usage};
use studio_core::fui::{FuiDocument, Placement, Rect, Screen};
use studio_core::Slug;

const REFS: [&str; 5] = ["button", "text-field", "label", "combo-box", "interview-result-grid"];

fn random_doc(rng: &mut ChaCha8Rng, project: &str) -> FuiDocument {
    let mut doc = FuiDocument::new(Slug::new(project).unwrap());
    for s in 0..rng.random_range(0..3) {
        let mut screen = Screen::new(Slug::new(format!("s{s}")).unwrap(), "S", 100, 100);
        for i in 0..rng.random_range(0..5) {
            let r = REFS[rng.random_range(0..REFS.len())];
            screen.components.push(Placement::new(
                Slug::new(format!("c{i}")).unwrap(),
                Slug::new(r).unwrap(),
                Rect::new(0, 0, 1, 1),
                "x",
            ));
        }
        doc.screens.push(screen);
    }
    doc
}

fn recount(latest: &BTreeMap<String, FuiDocument>) -> BTreeMap<String, Usage> {
    let mut out: BTreeMap<String, Usage> = BTreeMap::new();
    for doc in latest.values() {
        let mut seen = Vec::new();
        for (_, p) in doc.placements() {
            let u = out.entry(p.component_ref.to_string()).or_default();
            u.placements += 1;
            if !seen.contains(&p.component_ref) {
                seen.push(p.component_ref.clone());
                u.projects += 1;
            }
        }
    }
    out
}

#[test]
fn incremental_matches_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut stats = ReuseStats::new();
    let mut latest: BTreeMap<String, FuiDocument> = BTreeMap::new();
    for _ in 0..2000 {
        let project = ["hr-portal", "payroll", "intranet", "crm"][rng.random_range(0..4)];
        let doc = random_doc(&mut rng, project);
        let previous = latest.get(project).map(placement_counts);
        stats.replace_project(previous.as_ref(), &placement_counts(&doc));
        latest.insert(project.to_string(), doc);

        let expected = recount(&latest);
        let actual: BTreeMap<String, Usage> = stats.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        assert_eq!(actual, expected);
    }
}

#[test]
fn resaving_identical_document_is_a_zero_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut stats = ReuseStats::new();
    let doc = random_doc(&mut rng, "hr-portal");
    let counts = placement_counts(&doc);
    stats.replace_project(None, &counts);
    let snapshot = stats.clone();
    assert!(stats.replace_project(Some(&counts), &counts).is_empty());
    assert_eq!(stats, snapshot);
}
