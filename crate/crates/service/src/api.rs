//! HTTP endpoints and the push channel.
//!
//! Every mutation is checked against the live world and queued for the next
//! simulated second; the response is `202 Accepted` with the instant it will
//! apply. Reads lock the world briefly and answer from one consistent
//! snapshot. Transcript records produced while the clock runs are broadcast
//! to every `/stream` subscriber as server-sent events.

use std::collections::BTreeMap;
use std::convert::Infallible;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use chrono::NaiveDateTime;
use futures::Stream;
use housekeeper::events::{CellChange, EventKind};
use housekeeper::people::{FaceTag, PersonId};
use housekeeper::planner::Cell;
use housekeeper::scheduler::{Priority, TaskId, TaskKind};
use housekeeper::sim::camera::CameraSet;
use housekeeper::sim::command::Command;
use housekeeper::sim::transcript::Record;
use housekeeper::sim::{QueuedCommand, Rejection, World, WorldError};
use housekeeper::sms::MessageId;
use housekeeper::state::save_state;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::broadcast;

const PUSH_BUFFER: usize = 4096;

/// Shared handle on the live world.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    world: Mutex<World>,
    history: Mutex<Vec<Record>>,
    push: broadcast::Sender<String>,
}

impl AppState {
    pub fn new(world: World) -> Self {
        let (push, _) = broadcast::channel(PUSH_BUFFER);
        AppState {
            inner: Arc::new(Inner {
                world: Mutex::new(world),
                history: Mutex::new(Vec::new()),
                push,
            }),
        }
    }

    pub fn world(&self) -> MutexGuard<'_, World> {
        self.inner.world.lock().expect("world lock poisoned")
    }

    /// Records produced so far, oldest first.
    pub fn history(&self) -> Vec<Record> {
        self.inner.history.lock().expect("history lock poisoned").clone()
    }

    pub fn subscribe(&self) -> broadcast::Receiver<String> {
        self.inner.push.subscribe()
    }

    /// Move the clock forward and publish what happened.
    pub fn advance(&self, dt_s: u64) -> Vec<Record> {
        let mut world = self.world();
        let records = world.advance(dt_s);
        self.publish(&records);
        records
    }

    pub fn advance_to(&self, t: NaiveDateTime) -> Vec<Record> {
        let mut world = self.world();
        let records = world.advance_to(t);
        self.publish(&records);
        records
    }

    fn publish(&self, records: &[Record]) {
        let mut history = self.inner.history.lock().expect("history lock poisoned");
        for r in records {
            // No subscribers is fine.
            let _ = self.inner.push.send(r.to_json());
        }
        history.extend_from_slice(records);
    }

    fn submit(&self, command: Command) -> Result<QueuedCommand, ApiError> {
        // Publish under the world lock so notices and records stay in order.
        let mut world = self.world();
        let queued = world.submit(command).map_err(ApiError::from)?;
        let _ = self.inner.push.send(
            json!({ "type": "queued", "at": queued.at, "seq": queued.seq, "command": queued.command.name() })
                .to_string(),
        );
        drop(world);
        Ok(queued)
    }
}

#[derive(Debug)]
pub enum ApiError {
    Rejected(Rejection),
    BadRequest(String),
}

impl From<WorldError> for ApiError {
    fn from(e: WorldError) -> Self {
        match e {
            WorldError::Rejected(r) => ApiError::Rejected(r),
            other => ApiError::BadRequest(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::Rejected(Rejection::NotFound(m)) => (StatusCode::NOT_FOUND, m),
            ApiError::Rejected(Rejection::Conflict(m)) => (StatusCode::CONFLICT, m),
            ApiError::Rejected(Rejection::Invalid(m)) => (StatusCode::UNPROCESSABLE_ENTITY, m),
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
        };
        (status, Json(json!({ "error": message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn accepted(q: QueuedCommand) -> (StatusCode, Json<Value>) {
    (
        StatusCode::ACCEPTED,
        Json(json!({ "applies_at": q.at, "seq": q.seq })),
    )
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/tasks", get(list_tasks).post(add_task))
        .route("/tasks/current", get(current_tasks))
        .route("/tasks/{id}", delete(cancel_task))
        .route("/people", get(list_people).post(add_person))
        .route("/people/{id}", delete(remove_person))
        .route("/sms", get(sms))
        .route("/sms/{id}/reply", post(reply_sms))
        .route("/prefs", get(prefs).put(set_prefs))
        .route("/map", get(map))
        .route("/map/cells", post(set_cell))
        .route("/view", get(view))
        .route("/events", post(inject_event))
        .route("/clock", get(clock).post(advance_clock))
        .route("/state", get(state_doc))
        .route("/transcript", get(transcript))
        .route("/stream", get(stream))
        .with_state(state)
}

async fn list_tasks(State(s): State<AppState>) -> Json<Value> {
    Json(json!(s.world().scheduler().tasks()))
}

async fn current_tasks(State(s): State<AppState>) -> Json<Value> {
    Json(json!(s.world().scheduler().current_tasks_view()))
}

#[derive(Deserialize)]
struct NewTask {
    kind: TaskKind,
    scheduled_at: NaiveDateTime,
    #[serde(default = "normal")]
    priority: Priority,
}

fn normal() -> Priority {
    Priority::Normal
}

async fn add_task(State(s): State<AppState>, Json(t): Json<NewTask>) -> ApiResult<impl IntoResponse> {
    s.submit(Command::AddTask {
        kind: t.kind,
        scheduled_at: t.scheduled_at,
        priority: t.priority,
    })
    .map(accepted)
}

async fn cancel_task(State(s): State<AppState>, Path(task): Path<TaskId>) -> ApiResult<impl IntoResponse> {
    s.submit(Command::CancelTask { task }).map(accepted)
}

async fn list_people(State(s): State<AppState>) -> Json<Value> {
    Json(json!(s.world().registry().list_people()))
}

#[derive(Deserialize)]
struct NewPersonBody {
    name: String,
    face_tag: FaceTag,
    #[serde(default)]
    photo_ref: String,
    #[serde(default)]
    telephone: String,
    #[serde(default)]
    mobile: String,
}

async fn add_person(State(s): State<AppState>, Json(p): Json<NewPersonBody>) -> ApiResult<impl IntoResponse> {
    s.submit(Command::AddPerson {
        name: p.name,
        face_tag: p.face_tag,
        photo_ref: p.photo_ref,
        telephone: p.telephone,
        mobile: p.mobile,
    })
    .map(accepted)
}

async fn remove_person(State(s): State<AppState>, Path(person): Path<PersonId>) -> ApiResult<impl IntoResponse> {
    s.submit(Command::RemovePerson { person }).map(accepted)
}

async fn sms(State(s): State<AppState>) -> Json<Value> {
    let w = s.world();
    let open: Vec<_> = w.sms().open_interactions().collect();
    Json(json!({
        "messages": w.sms().messages(),
        "open": open,
        "log": w.sms().sms_log_rows(),
    }))
}

#[derive(Deserialize)]
struct ReplyBody {
    text: String,
}

async fn reply_sms(
    State(s): State<AppState>,
    Path(message): Path<MessageId>,
    Json(r): Json<ReplyBody>,
) -> ApiResult<impl IntoResponse> {
    s.submit(Command::ReplySms { message, text: r.text }).map(accepted)
}

async fn prefs(State(s): State<AppState>) -> Json<Value> {
    let w = s.world();
    Json(json!(w.sms().prefs().effective(&w.config().events)))
}

/// Validates every entry before queueing any, so a bad entry changes nothing.
async fn set_prefs(
    State(s): State<AppState>,
    Json(body): Json<BTreeMap<EventKind, bool>>,
) -> ApiResult<impl IntoResponse> {
    let commands: Vec<Command> = body
        .into_iter()
        .map(|(kind, on)| Command::SetPref { kind, on })
        .collect();
    let world = s.world();
    for c in &commands {
        world.validate(c).map_err(ApiError::Rejected)?;
    }
    drop(world);
    let mut last = None;
    for c in commands {
        last = Some(s.submit(c)?);
    }
    match last {
        Some(q) => Ok(accepted(q).into_response()),
        None => Ok(StatusCode::NO_CONTENT.into_response()),
    }
}

#[derive(Serialize)]
struct MapView {
    width: usize,
    height: usize,
    cell_size: f64,
    rows: Vec<String>,
    locations: Value,
    robot: Value,
    path: Value,
}

async fn map(State(s): State<AppState>) -> Json<MapView> {
    let w = s.world();
    let m = w.map();
    let rows = m
        .to_document()
        .lines()
        .skip_while(|l| *l != "grid")
        .skip(1)
        .take(m.height())
        .map(str::to_owned)
        .collect();
    Json(MapView {
        width: m.width(),
        height: m.height(),
        cell_size: m.cell_size(),
        rows,
        locations: json!(m.locations()),
        robot: json!(w.robot()),
        path: json!(w.current_path()),
    })
}

#[derive(Deserialize)]
struct CellBody {
    row: usize,
    col: usize,
    cell: Cell,
}

async fn set_cell(State(s): State<AppState>, Json(c): Json<CellBody>) -> ApiResult<impl IntoResponse> {
    s.submit(Command::SetCell {
        row: c.row,
        col: c.col,
        cell: c.cell,
    })
    .map(accepted)
}

async fn view(State(s): State<AppState>) -> ApiResult<Json<Value>> {
    let w = s.world();
    let cameras = w
        .view()
        .map_err(|e| ApiError::BadRequest(e.to_string()))?;
    Ok(Json(json!({
        "now": w.now(),
        "window": CameraSet::window(w.now()),
        "cameras": cameras,
    })))
}

#[derive(Deserialize)]
struct EventBody {
    kind: EventKind,
    location: String,
    #[serde(default)]
    subject: Option<FaceTag>,
    #[serde(default)]
    cells: Vec<CellChange>,
}

async fn inject_event(State(s): State<AppState>, Json(e): Json<EventBody>) -> ApiResult<impl IntoResponse> {
    s.submit(Command::InjectEvent {
        kind: e.kind,
        location: e.location,
        subject: e.subject,
        cells: e.cells,
    })
    .map(accepted)
}

async fn clock(State(s): State<AppState>) -> Json<Value> {
    Json(json!({ "now": s.world().now() }))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClockBody {
    By { advance_s: u64 },
    To { until: NaiveDateTime },
}

/// Manual clock control, for runs without live pacing.
async fn advance_clock(State(s): State<AppState>, Json(body): Json<ClockBody>) -> Json<Value> {
    let records = match body {
        ClockBody::By { advance_s } => s.advance(advance_s),
        ClockBody::To { until } => s.advance_to(until),
    };
    Json(json!({ "now": s.world().now(), "records": records.len() }))
}

async fn state_doc(State(s): State<AppState>) -> impl IntoResponse {
    let doc = save_state(&s.world());
    ([("content-type", "application/json")], doc)
}

async fn transcript(State(s): State<AppState>) -> impl IntoResponse {
    let body: String = s
        .history()
        .iter()
        .map(|r| r.to_json() + "\n")
        .collect();
    ([("content-type", "application/x-ndjson")], body)
}

/// Server-sent events. The first event, `hello`, carries the current clock;
/// after it every transcript record and queued command is pushed in order.
async fn stream(State(s): State<AppState>) -> Sse<impl Stream<Item = Result<Event, Infallible>>> {
    let rx = s.subscribe();
    let hello = json!({ "now": s.world().now() }).to_string();
    let first = futures::stream::once(async move { Ok(Event::default().event("hello").data(hello)) });
    let rest = futures::stream::unfold(rx, |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(data) => return Some((Ok(Event::default().event("record").data(data)), rx)),
                Err(broadcast::error::RecvError::Lagged(_)) => continue,
                Err(broadcast::error::RecvError::Closed) => return None,
            }
        }
    });
    use futures::StreamExt;
    Sse::new(first.chain(rest)).keep_alive(KeepAlive::default())
}
