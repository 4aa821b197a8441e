use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use studio::fixtures::{fixtures_dir, FUI_FIXTURE};
use studio::store::{descriptor_json, stats_json, CatalogStore, StoreError};
use studio_core::catalog::{Category, ComponentDescriptor, ComponentDraft, PropSpec, PropType, SearchQuery};
use studio_core::fui::{parse_fui, FuiDocument, Placement, Rect, Screen};
use studio_core::Slug;
use walkdir::WalkDir;

fn slug(s: &str) -> Slug {
    Slug::new(s).unwrap()
}

/// A writable copy of the reference catalog.
fn seeded_store(dir: &Path) -> CatalogStore {
    let from = fixtures_dir().join("catalog");
    for entry in WalkDir::new(&from) {
        let entry = entry.unwrap();
        let to = dir.join("catalog").join(entry.path().strip_prefix(&from).unwrap());
        if entry.file_type().is_dir() {
            fs::create_dir_all(&to).unwrap();
        } else {
            fs::copy(entry.path(), &to).unwrap();
        }
    }
    CatalogStore::open(dir).unwrap()
}

fn draft(id: &str, category: Category, props: Vec<PropSpec>) -> ComponentDraft {
    ComponentDraft {
        id: slug(id),
        name: id.into(),
        category,
        domain_tags: BTreeSet::new(),
        prop_schema: props,
        template_hooks: vec![slug("view")],
    }
}

fn button_v1() -> ComponentDraft {
    draft("button", Category::GeneralPurpose, vec![PropSpec::new("label", PropType::String)])
}

/// Every descriptor file under the store, parsed independently of the store.
fn scan_descriptors(root: &Path) -> Vec<ComponentDescriptor> {
    let mut out = Vec::new();
    for entry in WalkDir::new(root.join("catalog")).min_depth(2).max_depth(2) {
        let entry = entry.unwrap();
        if entry.path().extension().is_some_and(|e| e == "json") {
            out.push(serde_json::from_str(&fs::read_to_string(entry.path()).unwrap()).unwrap());
        }
    }
    out
}

#[test]
fn versions_start_at_one_and_old_versions_stay_readable() {
    let tmp = tempfile::tempdir().unwrap();
    let mut store = CatalogStore::create(tmp.path()).unwrap();
    assert_eq!(store.register(button_v1()).unwrap(), 1);

    let mut v2 = button_v1();
    v2.prop_schema.push(PropSpec::new(
        "style",
        PropType::Enum(vec!["flat".into(), "raised".into()]),
    ));
    assert_eq!(store.register(v2.clone()).unwrap(), 2);

    // Re-read both files and diff them.
    let read = |v: u32| -> ComponentDescriptor {
        serde_json::from_str(&fs::read_to_string(store.descriptor_path("button", v)).unwrap()).unwrap()
    };
    let (one, two) = (read(1), read(2));
    assert_eq!(one.version, 1);
    assert_eq!(two.version, 2);
    assert_eq!(one.prop_schema.len() + 1, two.prop_schema.len());
    assert_eq!(two.prop_schema.last().unwrap().name, "style");
    assert_eq!(store.catalog().get("button", 1), Some(&one));
    assert_eq!(store.catalog().head("button"), Some(&two));

    let err = store.register(v2).unwrap_err();
    assert_eq!(err.code(), "NO_CHANGE");
    assert!(!store.descriptor_path("button", 3).exists());
}

#[test]
fn descriptor_file_uses_the_documented_keys_in_order() {
    let tmp = tempfile::tempdir().unwrap();
    let mut store = CatalogStore::create(tmp.path()).unwrap();
    store.register(button_v1()).unwrap();
    let text = fs::read_to_string(store.descriptor_path("button", 1)).unwrap();
    let keys = ["\"id\"", "\"name\"", "\"category\"", "\"domain_tags\"", "\"prop_schema\"", "\"template_hooks\"", "\"version\""];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn domain_specific_without_tags_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let mut store = CatalogStore::create(tmp.path()).unwrap();
    let err = store
        .register(draft("interview-result-grid", Category::DomainSpecific, vec![]))
        .unwrap_err();
    assert_eq!(err.code(), "VALIDATION");
    assert!(store.catalog().is_empty());
    assert!(!tmp.path().join("catalog/interview-result-grid").exists());
}

#[test]
fn search_examples_on_reference_catalog() {
    let tmp = tempfile::tempdir().unwrap();
    let store = seeded_store(tmp.path());
    let ids = |q: SearchQuery| -> Vec<String> { store.search(&q).iter().map(|d| d.id.to_string()).collect() };

    assert_eq!(
        ids(SearchQuery {
            category: Some(Category::GeneralPurpose),
            ..Default::default()
        }),
        ["button", "combo-box", "label", "text-field"]
    );
    assert_eq!(
        ids(SearchQuery {
            text: Some("butt".into()),
            ..Default::default()
        }),
        ["button"]
    );
    // Name matches are case-insensitive too.
    assert_eq!(
        ids(SearchQuery {
            text: Some("COMBO".into()),
            ..Default::default()
        }),
        ["combo-box"]
    );

    // Oracle: filter the raw descriptor files.
    let mut expected: Vec<String> = scan_descriptors(tmp.path())
        .into_iter()
        .filter(|d| d.domain_tags.iter().any(|t| t.as_str() == "hr"))
        .map(|d| d.id.to_string())
        .collect();
    expected.sort();
    let got = ids(SearchQuery {
        domain_tag: Some("hr".into()),
        ..Default::default()
    });
    assert_eq!(got, expected);
    assert_eq!(got, ["employee-profile-card", "interview-result-grid", "salary-slip-table"]);
}

#[test]
fn unfiltered_search_is_exactly_the_heads_on_disk() {
    let tmp = tempfile::tempdir().unwrap();
    let mut store = seeded_store(tmp.path());
    let mut v2 = store.catalog().head("label").unwrap().draft();
    v2.name = "Text Label".into();
    store.register(v2).unwrap();

    let mut heads: BTreeMap<String, ComponentDescriptor> = BTreeMap::new();
    for d in scan_descriptors(tmp.path()) {
        let keep = heads.get(d.id.as_str()).is_none_or(|h| h.version < d.version);
        if keep {
            heads.insert(d.id.to_string(), d);
        }
    }
    let expected: Vec<&ComponentDescriptor> = heads.values().collect();
    assert_eq!(store.search(&SearchQuery::default()), expected);
}

#[test]
fn random_registrations_keep_versions_gapless() {
    let tmp = tempfile::tempdir().unwrap();
    let mut store = CatalogStore::create(tmp.path()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let id = ["a", "b", "c"][rng.random_range(0..3)];
        let mut d = draft(id, Category::GeneralPurpose, vec![]);
        d.name = format!("name {}", rng.random_range(0..4));
        let _ = store.register(d);
    }
    for id in ["a", "b", "c"] {
        let versions: Vec<u32> = store.catalog().versions(id).iter().map(|d| d.version).collect();
        assert_eq!(versions, (1..=versions.len() as u32).collect::<Vec<_>>());
        let mut on_disk: Vec<u32> = scan_descriptors(tmp.path())
            .iter()
            .filter(|d| d.id.as_str() == id)
            .map(|d| d.version)
            .collect();
        on_disk.sort();
        assert_eq!(on_disk, versions);
    }
}

fn doc_with(project: &str, refs: &[(&str, usize)]) -> FuiDocument {
    let mut doc = FuiDocument::new(slug(project));
    let mut screen = Screen::new(slug("s"), "S", 2000, 2000);
    let mut y = 0;
    for (r, n) in refs {
        for i in 0..*n {
            screen.components.push(Placement::new(
                Slug::new(format!("{r}-{}", i + 1)).unwrap(),
                slug(r),
                Rect::new(0, y, 10, 10),
                "x",
            ));
            y += 10;
        }
    }
    doc.screens.push(screen);
    doc
}

#[test]
fn record_reuse_counts_and_replaces() {
    let tmp = tempfile::tempdir().unwrap();
    let mut store = seeded_store(tmp.path());
    let p = slug("hr-portal");

    let delta = store.record_reuse(&p, &FuiDocument::new(p.clone())).unwrap();
    assert!(delta.is_empty());

    let delta = store
        .record_reuse(&p, &doc_with("hr-portal", &[("button", 5), ("text-field", 2)]))
        .unwrap();
    assert_eq!(delta.get("button").placements, 5);
    assert_eq!(delta.get("text-field").placements, 2);
    assert_eq!(delta.get("button").projects, 1);
    assert_eq!(delta.get("text-field").projects, 1);

    store.record_reuse(&p, &doc_with("hr-portal", &[("button", 3)])).unwrap();
    assert_eq!(store.stats().usage("button").placements, 3);
    assert_eq!(store.stats().usage("button").projects, 1);
    assert_eq!(store.stats().usage("text-field").placements, 0);
    assert_eq!(store.stats().usage("text-field").projects, 0);
}

#[test]
fn invalid_document_leaves_stats_and_files_untouched() {
    let tmp = tempfile::tempdir().unwrap();
    let mut store = seeded_store(tmp.path());
    let p = slug("p");
    store.record_reuse(&p, &doc_with("p", &[("button", 1)])).unwrap();
    let stats_before = fs::read(store.stats_path()).unwrap();
    let project_before = fs::read(store.project_path("p")).unwrap();

    let err = store
        .record_reuse(&p, &doc_with("p", &[("button", 4), ("no-such-widget", 1)]))
        .unwrap_err();
    assert!(matches!(err, StoreError::Invalid(_)));
    assert_eq!(store.stats().usage("button").placements, 1);
    assert_eq!(fs::read(store.stats_path()).unwrap(), stats_before);
    assert_eq!(fs::read(store.project_path("p")).unwrap(), project_before);
}

#[test]
fn rarely_used_report_examples() {
    let tmp = tempfile::tempdir().unwrap();
    let mut fresh = CatalogStore::create(tmp.path().join("fresh")).unwrap();
    for id in ["button", "text-field", "combo-box", "label"] {
        fresh.register(draft(id, Category::GeneralPurpose, vec![])).unwrap();
    }
    let report = fresh.rarely_used_report(0);
    assert_eq!(report.len(), 4);
    assert!(report.iter().all(|r| r.placements == 0));

    let mut store = seeded_store(&tmp.path().join("seeded"));
    let text = fs::read_to_string(fixtures_dir().join(FUI_FIXTURE)).unwrap();
    let doc = parse_fui(&text).unwrap();
    store.record_reuse(&doc.project, &doc).unwrap();

    // Oracle: catalog ids minus every ref placed in the fixture.
    let placed: BTreeSet<&str> = doc.placements().map(|(_, p)| p.component_ref.as_str()).collect();
    let never: Vec<String> = store
        .catalog()
        .ids()
        .filter(|id| !placed.contains(id.as_str()))
        .map(|id| id.to_string())
        .collect();
    let got: Vec<String> = store.rarely_used_report(0).into_iter().map(|r| r.id.to_string()).collect();
    assert_eq!(got, never);
    assert_eq!(got, ["salary-slip-table"]);

    let all = store.rarely_used_report(1_000_000_000);
    assert_eq!(all.len(), store.catalog().len());
    assert!(all.windows(2).all(|w| (w[0].placements, &w[0].id) <= (w[1].placements, &w[1].id)));
}

#[test]
fn reopening_reproduces_index_and_stats() {
    let tmp = tempfile::tempdir().unwrap();
    let mut store = seeded_store(tmp.path());
    let mut v2 = store.catalog().head("button").unwrap().draft();
    v2.name = "Push Button".into();
    store.register(v2).unwrap();
    store.record_reuse(&slug("a"), &doc_with("a", &[("button", 2), ("label", 1)])).unwrap();
    store.record_reuse(&slug("b"), &doc_with("b", &[("button", 1)])).unwrap();

    let reopened = CatalogStore::open(tmp.path()).unwrap();
    let dump = |s: &CatalogStore| -> Vec<String> {
        s.catalog()
            .ids()
            .flat_map(|id| s.catalog().versions(id).iter().map(descriptor_json))
            .collect()
    };
    assert_eq!(dump(&reopened), dump(&store));
    assert_eq!(stats_json(reopened.stats()), stats_json(store.stats()));
    assert_eq!(fs::read_to_string(store.stats_path()).unwrap(), stats_json(reopened.stats()));
}

#[test]
fn stale_stats_file_is_recounted_from_projects() {
    // A crash between the project write and the stats write.
    let tmp = tempfile::tempdir().unwrap();
    let mut store = seeded_store(tmp.path());
    store.record_reuse(&slug("a"), &doc_with("a", &[("button", 2)])).unwrap();
    fs::write(store.stats_path(), "{}\n").unwrap();
    let reopened = CatalogStore::open(tmp.path()).unwrap();
    assert_eq!(reopened.stats().usage("button").placements, 2);
}

#[test]
fn corrupt_descriptor_is_reported_with_its_path() {
    let tmp = tempfile::tempdir().unwrap();
    seeded_store(tmp.path());
    let path = tmp.path().join("catalog/label/1.json");
    fs::write(&path, "{ not json").unwrap();
    let err = CatalogStore::open(tmp.path()).unwrap_err();
    assert_eq!(err.code(), "CORRUPT_STORE");
    assert!(err.to_string().contains("label"), "{err}");

    // A version gap is corruption too.
    fs::copy(fixtures_dir().join("catalog/label/1.json"), &path).unwrap();
    let mut three: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    three["version"] = 3.into();
    fs::write(tmp.path().join("catalog/label/3.json"), three.to_string()).unwrap();
    assert_eq!(CatalogStore::open(tmp.path()).unwrap_err().code(), "CORRUPT_STORE");
}
