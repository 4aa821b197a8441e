//! HTTP API over the catalog store, the loaded packs and in-memory
//! project records.
//!
//! FUI endpoints exchange the FUI XML format; everything else is JSON with
//! sorted keys. Errors are `{"code", "message", "status", "details"?}`.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use studio_core::catalog::{Category, ComponentDraft, SearchQuery};
use studio_core::codegen::{generate, is_safe_rel_path, GenerateError};
use studio_core::fui::{parse_fui, serialize_fui, validate_fui, FuiDocument, ValidationReport, FUI_MIME};
use studio_core::{GenerationResult, Slug, TemplatePack};

use crate::store::{CatalogStore, StoreError};

pub const DEFAULT_PORT: u16 = 7878;
pub const EXPECTED_REVISION: &str = "x-expected-revision";
pub const REVISION: &str = "x-revision";

/// The closed set of error codes the API returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    BadRequest,
    MalformedFui,
    ProjectMismatch,
    NotFound,
    UnknownProject,
    UnknownComponent,
    UnknownPack,
    UnknownArtifact,
    RevisionConflict,
    NoChange,
    Validation,
    ValidationFailed,
    GenerationFailed,
    Internal,
}

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        use ErrorCode::*;
        match self {
            BadRequest | MalformedFui | ProjectMismatch => StatusCode::BAD_REQUEST,
            NotFound | UnknownProject | UnknownComponent | UnknownPack | UnknownArtifact => StatusCode::NOT_FOUND,
            RevisionConflict | NoChange => StatusCode::CONFLICT,
            Validation | ValidationFailed => StatusCode::UNPROCESSABLE_ENTITY,
            GenerationFailed | Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<ValidationReport>,
    pub status: u16,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            details: None,
            status: code.status().as_u16(),
        }
    }

    fn invalid(report: ValidationReport) -> Self {
        let mut e = ApiError::new(
            ErrorCode::ValidationFailed,
            format!("document has {} validation error(s)", report.error_count()),
        );
        e.details = Some(report);
        e
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Invalid(report) => ApiError::invalid(report),
            StoreError::Catalog(c) if c.code() == "NO_CHANGE" => ApiError::new(ErrorCode::NoChange, c.to_string()),
            StoreError::Catalog(c) => ApiError::new(ErrorCode::Validation, c.to_string()),
            other => ApiError::new(ErrorCode::Internal, other.to_string()),
        }
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::new(ErrorCode::BadRequest, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.code.status(), &self)
    }
}

type ApiResult<T = Response> = Result<T, ApiError>;

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json(value: &impl Serialize) -> String {
    // Round-tripping through `Value` sorts object keys.
    let value = serde_json::to_value(value).expect("API payloads serialize");
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    text
}

fn json_response(status: StatusCode, value: &impl Serialize) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "application/json")],
        canonical_json(value),
    )
        .into_response()
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectRecord {
    pub id: Slug,
    #[serde(skip)]
    pub doc: FuiDocument,
    pub revision: u64,
    pub created: String,
    pub updated: String,
}

#[derive(Debug)]
struct Generated {
    revision: u64,
    pack: String,
    result: GenerationResult,
}

#[derive(Debug)]
struct ProjectSlot {
    record: Mutex<ProjectRecord>,
    generated: Mutex<Option<Arc<Generated>>>,
    /// Serializes generation per project.
    generating: Mutex<()>,
}

pub struct AppState {
    store: RwLock<CatalogStore>,
    packs: BTreeMap<String, TemplatePack>,
    projects: Mutex<BTreeMap<Slug, Arc<ProjectSlot>>>,
    ui_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(store: CatalogStore, packs: impl IntoIterator<Item = TemplatePack>, ui_dir: Option<PathBuf>) -> Arc<Self> {
        Arc::new(AppState {
            store: RwLock::new(store),
            packs: packs.into_iter().map(|p| (p.name.to_string(), p)).collect(),
            projects: Mutex::new(BTreeMap::new()),
            ui_dir,
        })
    }

    fn slot(&self, id: &str) -> ApiResult<Arc<ProjectSlot>> {
        self.projects
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(ErrorCode::UnknownProject, format!("no project `{id}`")))
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/palette", get(palette))
        .route("/api/components", get(search_components).post(register_component))
        .route("/api/components/{id}", get(get_component))
        .route("/api/packs", get(list_packs))
        .route("/api/projects", get(list_projects))
        .route("/api/projects/{id}/fui", get(get_fui).put(put_fui))
        .route("/api/projects/{id}/validate", post(validate_project))
        .route("/api/projects/{id}/generate", post(generate_project))
        .route("/api/projects/{id}/manifest", get(get_manifest))
        .route("/api/projects/{id}/artifacts/{*path}", get(get_artifact))
        .route("/api/stats/rarely-used", get(rarely_used))
        .fallback(fallback)
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}

async fn palette(State(state): State<Arc<AppState>>) -> Response {
    let store = state.store.read().unwrap();
    let heads: Vec<_> = store.catalog().heads().collect();
    json_response(StatusCode::OK, &heads)
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    q: Option<String>,
    category: Option<String>,
    tag: Option<String>,
}

async fn search_components(
    State(state): State<Arc<AppState>>,
    query: Result<Query<SearchParams>, QueryRejection>,
) -> ApiResult {
    let Query(params) = query?;
    let category = match params.category.as_deref().filter(|c| !c.is_empty()) {
        Some(c) => Some(c.parse::<Category>().map_err(|e| ApiError::new(ErrorCode::BadRequest, e.to_string()))?),
        None => None,
    };
    let query = SearchQuery {
        text: params.q.filter(|q| !q.is_empty()),
        category,
        domain_tag: params.tag.filter(|t| !t.is_empty()),
    };
    let store = state.store.read().unwrap();
    Ok(json_response(StatusCode::OK, &store.search(&query)))
}

#[derive(Debug, Deserialize)]
struct VersionParam {
    version: Option<u32>,
}

async fn get_component(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<VersionParam>, QueryRejection>,
) -> ApiResult {
    let Query(params) = query?;
    let store = state.store.read().unwrap();
    let found = match params.version {
        Some(v) => store.catalog().get(&id, v),
        None => store.catalog().head(&id),
    };
    let d = found.ok_or_else(|| ApiError::new(ErrorCode::UnknownComponent, format!("no component `{id}`")))?;
    Ok(json_response(StatusCode::OK, d))
}

#[derive(Serialize)]
struct Registered<'a> {
    id: &'a str,
    version: u32,
}

async fn register_component(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let draft: ComponentDraft =
        serde_json::from_slice(&body).map_err(|e| ApiError::new(ErrorCode::BadRequest, e.to_string()))?;
    let id = draft.id.clone();
    let version = state.store.write().unwrap().register(draft)?;
    Ok(json_response(StatusCode::CREATED, &Registered { id: &id, version }))
}

#[derive(Serialize)]
struct PackInfo<'a> {
    name: &'a str,
    version: u32,
    target_label: &'a str,
}

async fn list_packs(State(state): State<Arc<AppState>>) -> Response {
    let packs: Vec<PackInfo> = state
        .packs
        .values()
        .map(|p| PackInfo {
            name: &p.name,
            version: p.version,
            target_label: &p.target_label,
        })
        .collect();
    json_response(StatusCode::OK, &packs)
}

async fn list_projects(State(state): State<Arc<AppState>>) -> Response {
    let slots: Vec<Arc<ProjectSlot>> = state.projects.lock().unwrap().values().cloned().collect();
    let records: Vec<ProjectRecord> = slots.iter().map(|s| s.record.lock().unwrap().clone()).collect();
    json_response(StatusCode::OK, &records)
}

async fn get_fui(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let slot = state.slot(&id)?;
    let (text, revision) = {
        let record = slot.record.lock().unwrap();
        let text = serialize_fui(&record.doc).map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))?;
        (text, record.revision)
    };
    Ok((
        [
            (header::CONTENT_TYPE, HeaderValue::from_static(FUI_MIME)),
            (header::HeaderName::from_static(REVISION), HeaderValue::from(revision)),
        ],
        text,
    )
        .into_response())
}

async fn put_fui(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult {
    let slug = Slug::new(&*id).map_err(|e| ApiError::new(ErrorCode::BadRequest, e.to_string()))?;
    let expected = match headers.get(EXPECTED_REVISION) {
        Some(v) => Some(
            v.to_str()
                .ok()
                .and_then(|s| s.trim().parse::<u64>().ok())
                .ok_or_else(|| ApiError::new(ErrorCode::BadRequest, "X-Expected-Revision must be an integer"))?,
        ),
        None => None,
    };
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::new(ErrorCode::MalformedFui, e.to_string()))?;
    let doc = parse_fui(text).map_err(|e| ApiError::new(ErrorCode::MalformedFui, e.to_string()))?;
    if doc.project != slug {
        return Err(ApiError::new(
            ErrorCode::ProjectMismatch,
            format!("document is for project `{}`, not `{slug}`", doc.project),
        ));
    }

    let mut projects = state.projects.lock().unwrap();
    let conflict = |current: u64, wanted: u64| {
        ApiError::new(
            ErrorCode::RevisionConflict,
            format!("project `{slug}` is at revision {current}, not {wanted}"),
        )
    };
    let (status, record) = match projects.get(&slug) {
        Some(slot) => {
            let mut record = slot.record.lock().unwrap();
            if let Some(wanted) = expected.filter(|&w| w != record.revision) {
                return Err(conflict(record.revision, wanted));
            }
            record.doc = doc;
            record.revision += 1;
            record.updated = now();
            (StatusCode::OK, record.clone())
        }
        None => {
            if let Some(wanted) = expected.filter(|&w| w != 0) {
                return Err(conflict(0, wanted));
            }
            let stamp = now();
            let record = ProjectRecord {
                id: slug.clone(),
                doc,
                revision: 1,
                created: stamp.clone(),
                updated: stamp,
            };
            projects.insert(
                slug,
                Arc::new(ProjectSlot {
                    record: Mutex::new(record.clone()),
                    generated: Mutex::new(None),
                    generating: Mutex::new(()),
                }),
            );
            (StatusCode::CREATED, record)
        }
    };
    Ok(json_response(status, &record))
}

async fn validate_project(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let slot = state.slot(&id)?;
    let doc = slot.record.lock().unwrap().doc.clone();
    let store = state.store.read().unwrap();
    Ok(json_response(StatusCode::OK, &validate_fui(&doc, store.catalog())))
}

#[derive(Debug, Deserialize)]
struct PackParam {
    pack: Option<String>,
}

#[derive(Serialize)]
struct GenerateResponse<'a> {
    artifacts: Vec<&'a str>,
    manifest: &'a studio_core::codegen::Manifest,
    pack: &'a str,
    revision: u64,
}

async fn generate_project(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<PackParam>, QueryRejection>,
) -> ApiResult {
    let Query(params) = query?;
    let pack_name = params
        .pack
        .ok_or_else(|| ApiError::new(ErrorCode::BadRequest, "the `pack` query parameter is required"))?;
    if !state.packs.contains_key(&pack_name) {
        return Err(ApiError::new(ErrorCode::UnknownPack, format!("no pack `{pack_name}`")));
    }
    let slot = state.slot(&id)?;
    let task_state = state.clone();
    let generated = tokio::task::spawn_blocking(move || run_generation(&task_state, &slot, &pack_name))
        .await
        .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))??;
    let body = GenerateResponse {
        artifacts: generated.result.artifacts.iter().map(|a| a.rel_path.as_str()).collect(),
        manifest: &generated.result.manifest,
        pack: &generated.pack,
        revision: generated.revision,
    };
    Ok(json_response(StatusCode::OK, &body))
}

/// Generates, records reuse, then publishes the new artifact set. Any
/// failure leaves the statistics and the served artifacts unchanged.
fn run_generation(state: &AppState, slot: &ProjectSlot, pack_name: &str) -> ApiResult<Arc<Generated>> {
    let _serial = slot.generating.lock().unwrap();
    let (project, doc, revision) = {
        let record = slot.record.lock().unwrap();
        (record.id.clone(), record.doc.clone(), record.revision)
    };
    let pack = &state.packs[pack_name];
    let result = {
        let store = state.store.read().unwrap();
        generate(&doc, pack, store.catalog()).map_err(|e| match e {
            GenerateError::Invalid(report) => ApiError::invalid(report),
            other => ApiError::new(ErrorCode::GenerationFailed, other.to_string()),
        })?
    };
    state.store.write().unwrap().record_reuse(&project, &doc)?;
    let generated = Arc::new(Generated {
        revision,
        pack: pack_name.to_string(),
        result,
    });
    *slot.generated.lock().unwrap() = Some(generated.clone());
    Ok(generated)
}

fn generated(state: &AppState, id: &str) -> ApiResult<Arc<Generated>> {
    state
        .slot(id)?
        .generated
        .lock()
        .unwrap()
        .clone()
        .ok_or_else(|| ApiError::new(ErrorCode::UnknownArtifact, format!("project `{id}` has not been generated")))
}

async fn get_manifest(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let g = generated(&state, &id)?;
    Ok((
        [
            (header::CONTENT_TYPE, HeaderValue::from_static("application/json")),
            (header::HeaderName::from_static(REVISION), HeaderValue::from(g.revision)),
        ],
        g.result.manifest_json(),
    )
        .into_response())
}

fn content_type(path: &str) -> &'static str {
    match path.rsplit_once('.').map(|(_, ext)| ext) {
        Some("html") => "text/html; charset=utf-8",
        Some("js") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("json") => "application/json",
        Some("sql" | "txt" | "md") => "text/plain; charset=utf-8",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        _ => "application/octet-stream",
    }
}

async fn get_artifact(State(state): State<Arc<AppState>>, Path((id, path)): Path<(String, String)>) -> ApiResult {
    let g = generated(&state, &id)?;
    let artifact = g
        .result
        .artifact(&path)
        .ok_or_else(|| ApiError::new(ErrorCode::UnknownArtifact, format!("no artifact `{path}`")))?;
    Ok((
        [
            (header::CONTENT_TYPE, HeaderValue::from_static(content_type(&path))),
            (header::HeaderName::from_static(REVISION), HeaderValue::from(g.revision)),
        ],
        artifact.bytes.clone(),
    )
        .into_response())
}

#[derive(Debug, Deserialize)]
struct ThresholdParam {
    threshold: Option<u64>,
}

async fn rarely_used(
    State(state): State<Arc<AppState>>,
    query: Result<Query<ThresholdParam>, QueryRejection>,
) -> ApiResult {
    let Query(params) = query?;
    let store = state.store.read().unwrap();
    Ok(json_response(
        StatusCode::OK,
        &store.rarely_used_report(params.threshold.unwrap_or(0)),
    ))
}

/// Serves the designer UI build when one is configured.
async fn fallback(State(state): State<Arc<AppState>>, uri: Uri) -> ApiResult {
    let not_found = || ApiError::new(ErrorCode::NotFound, format!("no route for `{}`", uri.path()));
    let Some(dir) = &state.ui_dir else {
        return Err(not_found());
    };
    if uri.path().starts_with("/api/") {
        return Err(not_found());
    }
    let rel = match uri.path().trim_start_matches('/') {
        "" => "index.html",
        p => p,
    };
    if !is_safe_rel_path(rel) {
        return Err(not_found());
    }
    let bytes = std::fs::read(dir.join(rel)).map_err(|_| not_found())?;
    Ok(([(header::CONTENT_TYPE, content_type(rel))], bytes).into_response())
}
