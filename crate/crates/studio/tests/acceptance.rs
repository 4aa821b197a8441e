//! One PASS/FAIL line per acceptance criterion. Exits non-zero on any FAIL.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use axum::body::{to_bytes, Body};
use axum::http::{Method, Request, StatusCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use studio::api::{router, AppState};
use studio::fixtures::{fixtures_dir, load_fixtures, FixtureSet, FUI_FIXTURE, PACK_DIR};
use studio::store::CatalogStore;
use studio_core::codegen::{html_escape, Role};
use studio_core::fui::{
    parse_fui, serialize_fui, validate_fui, ColumnType, EntityBinding, FieldMap, FuiDocument, Placement, Prop, Rect,
    Screen,
};
use studio_core::template::{parse_template, render, Value};
use studio_core::{generate, Ident, Slug};
use tower::ServiceExt;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixtures() -> FixtureSet {
    load_fixtures(&fixtures_dir()).expect("fixtures load")
}

fn cli_generate(out: &Path) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_studio"))
        .arg("generate")
        .arg(fixtures_dir().join(FUI_FIXTURE))
        .arg("--pack")
        .arg(fixtures_dir().join(PACK_DIR))
        .arg("--catalog")
        .arg(fixtures_dir())
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        o.status.code() == Some(0),
        "studio generate exited {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    fs::read(out.join("manifest.json")).map_err(|e| e.to_string())
}

fn golden_hr_portal() -> Outcome {
    let f = fixtures();
    let tmp = tempfile::tempdir().unwrap();
    let first = cli_generate(&tmp.path().join("run-1"))?;
    let second = cli_generate(&tmp.path().join("run-2"))?;
    ensure!(first == second, "manifests differ across two process runs");

    let a = generate(&f.doc, &f.pack, &f.catalog).map_err(|e| e.to_string())?;
    let b = generate(&f.doc, &f.pack, &f.catalog).map_err(|e| e.to_string())?;
    ensure!(a.manifest_json() == b.manifest_json(), "manifests differ across two in-process runs");
    ensure!(a.manifest_json().as_bytes() == first, "in-process manifest differs from the CLI manifest");

    let paths = |role: Role| -> Vec<&str> {
        a.artifacts
            .iter()
            .filter(|x| x.provenance.role == role)
            .map(|x| x.rel_path.as_str())
            .collect()
    };
    let mut views: Vec<&str> = paths(Role::View);
    views.sort();
    ensure!(
        views
            == [
                "views/add-candidate.html",
                "views/index.html",
                "views/interview-result.html",
                "views/login.html",
                "views/registration.html",
                "views/view-profile.html",
                "views/welcome.html"
            ],
        "views: {views:?}"
    );
    let handlers = paths(Role::Handler);
    ensure!(
        handlers
            == [
                "handlers/add-candidate.js",
                "handlers/interview-result.js",
                "handlers/login.js",
                "handlers/registration.js"
            ],
        "handlers: {handlers:?}"
    );
    ensure!(a.count(Role::DaoBase) == 1, "dao_base count {}", a.count(Role::DaoBase));
    ensure!(a.count(Role::DaoEntity) == 5, "dao_entity count {}", a.count(Role::DaoEntity));

    let schema = a.artifacts.iter().find(|x| x.provenance.role == Role::Schema).ok_or("no schema artifact")?;
    let tables = common::ddl_tables(&String::from_utf8_lossy(&schema.bytes));
    ensure!(tables.len() == 5, "{} CREATE TABLE statements", tables.len());
    let expected: [(&str, &[&str]); 4] = [
        ("Emp_Profile", &["emp_id", "name", "address", "dob", "experience", "doj", "email", "mobile"]),
        ("Emp_Credentials", &["emp_id", "password"]),
        ("Emp_Salary", &["emp_id", "designation", "basic", "da", "hra", "cca", "pf"]),
        ("Candidate_Profile", &["Regn_id", "name", "address", "qual", "email", "mobile", "experience"]),
    ];
    for (table, columns) in expected {
        let got = tables.iter().find(|(t, _)| t == table).ok_or(format!("no table {table}"))?;
        ensure!(got.1 == columns, "{table} columns {:?}", got.1);
    }
    ensure!(tables.iter().any(|(t, _)| t == "Cand_Int_Results"), "no table Cand_Int_Results");

    let report = f.check_golden(&a);
    ensure!(report.passed(), "{report}");
    Ok(format!("{} artifacts, manifest stable over 2 processes and 2 in-process runs", a.artifacts.len()))
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    const POOL: &[&str] = &["a", "Z", " ", "&", "<", ">", "\"", "'", "\t", "\n", "\r", "é", "ß", "漢", "😀", "]]>", "--"];
    (0..rng.random_range(0..10)).map(|_| POOL[rng.random_range(0..POOL.len())]).collect()
}

fn random_slug(rng: &mut ChaCha8Rng) -> Slug {
    let s: String = (0..rng.random_range(1..8))
        .map(|_| b"abcxyz019-"[rng.random_range(0..10)] as char)
        .collect();
    Slug::new(format!("s{s}")).unwrap()
}

fn random_ident(rng: &mut ChaCha8Rng) -> Ident {
    let s: String = (0..rng.random_range(0..8))
        .map(|_| b"abXY_09"[rng.random_range(0..7)] as char)
        .collect();
    Ident::new(format!("T{s}")).unwrap()
}

fn random_doc(rng: &mut ChaCha8Rng) -> FuiDocument {
    let mut doc = FuiDocument::new(random_slug(rng));
    for _ in 0..rng.random_range(0..4) {
        let mut screen = Screen::new(random_slug(rng), random_text(rng), rng.random_range(1..5000), rng.random());
        screen.height = screen.height.max(1);
        for _ in 0..rng.random_range(0..5) {
            let mut p = Placement::new(
                random_slug(rng),
                random_slug(rng),
                Rect::new(rng.random(), rng.random(), rng.random_range(1..u32::MAX), rng.random_range(1..500)),
                random_text(rng),
            );
            for i in 0..rng.random_range(0..3) {
                p.props.push(Prop::new(format!("p{i}"), random_text(rng)));
            }
            if rng.random_bool(0.3) {
                p.action = Some(random_slug(rng));
            }
            screen.components.push(p);
        }
        doc.screens.push(screen);
    }
    for _ in 0..rng.random_range(0..3) {
        let maps = (0..rng.random_range(0..4))
            .map(|_| FieldMap {
                instance_id: random_slug(rng),
                column: random_ident(rng),
                column_type: match rng.random_range(0..4) {
                    0 => ColumnType::Text(rng.random_range(1..4000)),
                    1 => ColumnType::Integer,
                    2 => {
                        let p = rng.random_range(1..38);
                        ColumnType::Decimal(p, rng.random_range(0..=p))
                    }
                    _ => ColumnType::Date,
                },
            })
            .collect();
        doc.bindings.push(EntityBinding {
            screen_id: random_slug(rng),
            entity_name: random_ident(rng),
            primary_key: random_ident(rng),
            field_maps: maps,
        });
    }
    doc
}

fn fui_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let start = Instant::now();
    let n = 1000;
    for i in 0..n {
        let doc = random_doc(&mut rng);
        let text = serialize_fui(&doc).map_err(|e| format!("doc {i}: {e}"))?;
        let back = parse_fui(&text).map_err(|e| format!("doc {i}: {e}\n{text}"))?;
        ensure!(back == doc, "doc {i} changed across the round trip:\n{text}");
        let again = serialize_fui(&back).map_err(|e| e.to_string())?;
        ensure!(again == text, "doc {i}: serialization is not byte-stable");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("{n} documents in {:.2}s", elapsed.as_secs_f64()))
}

fn validator_corpus() -> Outcome {
    let f = fixtures();
    let clean = validate_fui(&f.doc, &f.catalog);
    ensure!(clean.error_count() == 0, "clean fixture has errors: {clean:?}");
    let mut files: Vec<_> = fs::read_dir(fixtures_dir().join("corrupt"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    ensure!(files.len() == 10, "{} corrupt variants", files.len());
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy();
        let expected = name
            .trim_end_matches(".fui.xml")
            .split_once('-')
            .unwrap()
            .1
            .replace('-', "_")
            .to_uppercase();
        let doc = parse_fui(&fs::read_to_string(path).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        let report = validate_fui(&doc, &f.catalog);
        let codes: Vec<&str> = report.errors().map(|i| i.code.as_str()).collect();
        ensure!(codes == [expected.as_str()], "{name}: {codes:?}");
    }
    Ok("10 variants, clean fixture has 0 errors".into())
}

fn template_suite() -> Outcome {
    let ctx = Value::map()
        .with("project", "hr-portal")
        .with("on", true)
        .with("off", false)
        .with("names", vec!["a", "b", "c"])
        .with("rows", vec![Value::map().with("col", "x"), Value::map().with("col", "y")]);
    let cases: &[(&str, &str)] = &[
        ("{{project}}!", "hr-portal!"),
        ("{{#each names}}[{{.}}]{{/each}}", "[a][b][c]"),
        ("{{#each rows}}{{.col}},{{/each}}", "x,y,"),
        ("{{#if on}}yes{{/if}}{{#if off}}no{{/if}}", "yes"),
        ("a\n  {{#if on}}\nb\n  {{/if}}\nc\n", "a\nb\nc\n"),
        ("\\{{project}}", "{{project}}"),
    ];
    for (body, want) in cases {
        let t = parse_template(body).map_err(|e| format!("{body:?}: {e}"))?;
        let got = render(&t, &ctx).map_err(|e| format!("{body:?}: {e}"))?;
        ensure!(got == *want, "{body:?} rendered {got:?}");
    }
    ensure!(html_escape("<a href=\"x\">&'") == "&lt;a href=&quot;x&quot;&gt;&amp;&#39;", "html_escape");
    for body in ["{{nope}}", "{{#if nope}}x{{/if}}", "{{#each nope}}x{{/each}}", "{{project.deeper}}"] {
        let t = parse_template(body).map_err(|e| e.to_string())?;
        match render(&t, &ctx) {
            Err(e) if e.code() == "MISSING_PATH" => {}
            other => return Err(format!("{body:?}: expected MISSING_PATH, got {other:?}")),
        }
    }

    // Truncation fuzz: a cut inside any section must be a parse error.
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut checked = 0;
    while checked < 500 {
        let mut text = String::new();
        let mut spans = Vec::new();
        gen_template(&mut rng, 0, &mut text, &mut spans);
        let Some(&(s, e)) = spans.get(rng.random_range(0..spans.len().max(1))) else {
            continue;
        };
        let cut = rng.random_range(s + 2..e);
        if !text.is_char_boundary(cut) {
            continue;
        }
        let truncated = &text[..cut];
        match panic::catch_unwind(|| parse_template(truncated)) {
            Ok(Err(_)) => {}
            Ok(Ok(_)) => return Err(format!("truncation {truncated:?} parsed")),
            Err(_) => return Err(format!("truncation {truncated:?} panicked")),
        }
        checked += 1;
    }
    Ok(format!("{} rendering cases, 4 strict-path cases, {checked} truncations", cases.len()))
}

fn gen_template(rng: &mut ChaCha8Rng, depth: u32, out: &mut String, spans: &mut Vec<(usize, usize)>) {
    for _ in 0..rng.random_range(1..=3) {
        match rng.random_range(0..4) {
            0 => out.push_str("text\n"),
            1 => out.push_str("{{project}}"),
            _ if depth < 3 => {
                let start = out.len();
                let each = rng.random_bool(0.5);
                out.push_str(if each { "{{#each names}}{{.}}" } else { "{{#if on}}\n" });
                gen_template(rng, depth + 1, out, spans);
                out.push_str(if each { "{{/each}}" } else { "{{/if}}" });
                spans.push((start, out.len()));
                if !each {
                    out.push('\n');
                }
            }
            _ => out.push('.'),
        }
    }
}

fn reuse_oracle() -> Outcome {
    let f = fixtures();
    let ids: Vec<String> = f.catalog.ids().map(|s| s.to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for seq in 0..20 {
        let tmp = tempfile::tempdir().unwrap();
        common::copy_tree(&fixtures_dir().join("catalog"), &tmp.path().join("catalog"));
        let mut store = CatalogStore::open(tmp.path()).map_err(|e| e.to_string())?;
        let mut latest: BTreeMap<String, FuiDocument> = BTreeMap::new();
        for _ in 0..rng.random_range(5..25) {
            // Few projects, so most sequences re-record some of them.
            let project = format!("p{}", rng.random_range(0..4));
            let mut doc = FuiDocument::new(Slug::new(&*project).unwrap());
            let mut screen = Screen::new(Slug::new("main").unwrap(), "Main", 1000, 1000);
            let mut y = 0;
            for id in &ids {
                for n in 1..=rng.random_range(0..4u32) {
                    screen.components.push(Placement::new(
                        Slug::new(format!("{id}-{n}")).unwrap(),
                        Slug::new(&**id).unwrap(),
                        Rect::new(0, y, 10, 10),
                        "x",
                    ));
                    y += 10;
                }
            }
            doc.screens.push(screen);
            store
                .record_reuse(&doc.project.clone(), &doc)
                .map_err(|e| format!("sequence {seq}: {e}"))?;
            latest.insert(project, doc);
        }

        // Brute-force recount over the latest document of every project.
        let mut placements: BTreeMap<&str, u64> = BTreeMap::new();
        let mut projects: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for (project, doc) in &latest {
            for (_, p) in doc.placements() {
                *placements.entry(p.component_ref.as_str()).or_default() += 1;
                projects.entry(p.component_ref.as_str()).or_default().insert(project);
            }
        }
        for id in &ids {
            let usage = store.stats().usage(id);
            let want = (
                placements.get(id.as_str()).copied().unwrap_or(0),
                projects.get(id.as_str()).map_or(0, |s| s.len() as u64),
            );
            ensure!(
                (usage.placements, usage.projects) == want,
                "sequence {seq}, {id}: store says {:?}, recount {want:?}",
                (usage.placements, usage.projects)
            );
        }
        let zero: Vec<&str> = ids
            .iter()
            .map(String::as_str)
            .filter(|id| !placements.contains_key(id))
            .collect();
        let report: Vec<String> = store.rarely_used_report(0).into_iter().map(|r| r.id.to_string()).collect();
        ensure!(report == zero, "sequence {seq}: rarely_used(0) {report:?}, recount {zero:?}");

        let reopened = CatalogStore::open(tmp.path()).map_err(|e| e.to_string())?;
        ensure!(reopened.stats() == store.stats(), "sequence {seq}: stats differ after reopen");
    }
    Ok("20 sequences match the recount".into())
}

fn cli_api_manifest_equality() -> Outcome {
    let f = fixtures();
    let tmp = tempfile::tempdir().unwrap();
    let cli = cli_generate(&tmp.path().join("cli"))?;

    let store_root = tmp.path().join("store");
    common::copy_tree(&fixtures_dir().join("catalog"), &store_root.join("catalog"));
    let store = CatalogStore::open(&store_root).map_err(|e| e.to_string())?;
    let pack_name = f.pack.name.to_string();
    let app = router(AppState::new(store, [f.pack], None));
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let api = runtime.block_on(async {
        let send = |method: Method, uri: String, body: String| {
            let app = app.clone();
            async move {
                let req = Request::builder().method(method).uri(uri).body(Body::from(body)).unwrap();
                let res = app.oneshot(req).await.unwrap();
                let status = res.status();
                (status, to_bytes(res.into_body(), usize::MAX).await.unwrap().to_vec())
            }
        };
        let project = f.doc.project.to_string();
        let (s, _) = send(Method::PUT, format!("/api/projects/{project}/fui"), f.fui_text.clone()).await;
        ensure!(s == StatusCode::CREATED, "PUT returned {s}");
        let (s, body) = send(
            Method::POST,
            format!("/api/projects/{project}/generate?pack={pack_name}"),
            String::new(),
        )
        .await;
        ensure!(s == StatusCode::OK, "generate returned {s}: {}", String::from_utf8_lossy(&body));
        let (s, body) = send(Method::GET, format!("/api/projects/{project}/manifest"), String::new()).await;
        ensure!(s == StatusCode::OK, "manifest returned {s}");
        Ok(body)
    })?;
    ensure!(api == cli, "API manifest differs from CLI manifest");
    Ok(format!("{} manifest bytes identical", api.len()))
}

fn no_secondary_component() -> Outcome {
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let o = Command::new(cargo)
        .args(["metadata", "--no-deps", "--format-version", "1", "--offline"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(o.status.success(), "cargo metadata failed: {}", String::from_utf8_lossy(&o.stderr));
    let meta: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    let mut members: Vec<&str> = meta["packages"]
        .as_array()
        .ok_or("no packages")?
        .iter()
        .filter_map(|p| p["name"].as_str())
        .collect();
    members.sort();
    ensure!(members == ["studio", "studio-core"], "workspace members {members:?}");
    Ok("workspace holds only studio-core and studio".into())
}

fn main() {
    let criteria: [(&str, Check); 7] = [
        ("golden HR Portal generation", golden_hr_portal),
        ("FUI round-trip property", fui_round_trip),
        ("validator corpus", validator_corpus),
        ("template engine suite", template_suite),
        ("reuse-stats oracle equivalence", reuse_oracle),
        ("CLI/API manifest equality", cli_api_manifest_equality),
        ("no secondary component built", no_secondary_component),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason}");
            }
        }
    }
    println!("{} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
