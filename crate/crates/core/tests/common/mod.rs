//! Independent oracles and scenario builders shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use chrono::{Duration, NaiveDate, NaiveDateTime};
use housekeeper::config::WorldConfig;
use housekeeper::events::CellChange;
use housekeeper::fixtures;
use housekeeper::planner::{Cell, GridMap, Node};
use housekeeper::scheduler::{CatalogEntry, Decision, Outcome, Priority, Scheduler, TaskCatalog, TaskStatus};
use housekeeper::sim::command::Command;
use housekeeper::sim::scenario::Scenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn at(y: i32, m: u32, d: u32, h: u32, min: u32, s: u32) -> NaiveDateTime {
    NaiveDate::from_ymd_opt(y, m, d)
        .unwrap()
        .and_hms_opt(h, min, s)
        .unwrap()
}

// ---------------------------------------------------------------- planner

/// A random `w`×`h` grid with each cell blocked with probability `p`.
pub fn random_grid(rng: &mut ChaCha8Rng, w: usize, h: usize, p: f64) -> Vec<Vec<bool>> {
    (0..h)
        .map(|_| (0..w).map(|_| !rng.random_bool(p)).collect())
        .collect()
}

pub fn to_map(open: &[Vec<bool>]) -> GridMap {
    let rows: Vec<String> = open
        .iter()
        .map(|r| r.iter().map(|&o| if o { '.' } else { '#' }).collect())
        .collect();
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    GridMap::from_rows(&refs).unwrap()
}

/// Breadth-first distance between two open cells, 4-connected.
pub fn bfs(open: &[Vec<bool>], start: (usize, usize), goal: (usize, usize)) -> Option<usize> {
    let h = open.len();
    let w = open[0].len();
    let mut dist = vec![vec![usize::MAX; w]; h];
    let mut queue = VecDeque::new();
    dist[start.0][start.1] = 0;
    queue.push_back(start);
    while let Some((r, c)) = queue.pop_front() {
        if (r, c) == goal {
            return Some(dist[r][c]);
        }
        let d = dist[r][c];
        let mut next = Vec::new();
        if r > 0 {
            next.push((r - 1, c));
        }
        if r + 1 < h {
            next.push((r + 1, c));
        }
        if c > 0 {
            next.push((r, c - 1));
        }
        if c + 1 < w {
            next.push((r, c + 1));
        }
        for (nr, nc) in next {
            if open[nr][nc] && dist[nr][nc] == usize::MAX {
                dist[nr][nc] = d + 1;
                queue.push_back((nr, nc));
            }
        }
    }
    None
}

/// Whether `nodes` is a 4-connected walk over open cells from `start` to `goal`.
pub fn valid_walk(open: &[Vec<bool>], nodes: &[Node], start: Node, goal: Node) -> bool {
    if nodes.first() != Some(&start) || nodes.last() != Some(&goal) {
        return false;
    }
    let open_at = |n: &Node| open[n.row][n.col];
    nodes.iter().all(open_at)
        && nodes.windows(2).all(|w| {
            let dr = w[0].row.abs_diff(w[1].row);
            let dc = w[0].col.abs_diff(w[1].col);
            dr + dc == 1
        })
}

pub fn random_open_cell(rng: &mut ChaCha8Rng, open: &[Vec<bool>]) -> Option<(usize, usize)> {
    let cells: Vec<(usize, usize)> = (0..open.len())
        .flat_map(|r| (0..open[0].len()).map(move |c| (r, c)))
        .filter(|&(r, c)| open[r][c])
        .collect();
    if cells.is_empty() {
        None
    } else {
        Some(cells[rng.random_range(0..cells.len())])
    }
}

// -------------------------------------------------------------- scheduler

#[derive(Debug, Clone)]
pub struct Job {
    pub release_min: u64,
    pub duration_min: u64,
    pub high: bool,
}

pub fn random_jobs(rng: &mut ChaCha8Rng) -> Vec<Job> {
    let n = rng.random_range(1..=20);
    (0..n)
        .map(|_| Job {
            release_min: rng.random_range(0..=180),
            duration_min: rng.random_range(1..=60),
            high: rng.random_bool(0.5),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum St {
    Queued,
    Running,
    Done,
}

/// Minute-stepped brute force: at every minute, finish whatever has no work
/// left, then let the best ready job take over if it strictly outranks the
/// current one. Returns the status of every job at every minute.
pub fn brute_force(jobs: &[Job]) -> Vec<Vec<St>> {
    let horizon = jobs.iter().map(|j| j.release_min).max().unwrap_or(0)
        + jobs.iter().map(|j| j.duration_min).sum::<u64>()
        + 1;
    let mut st = vec![St::Queued; jobs.len()];
    let mut left: Vec<u64> = jobs.iter().map(|j| j.duration_min).collect();
    let mut running: Option<usize> = None;
    let mut trace = Vec::new();
    for m in 0..=horizon {
        if let Some(r) = running {
            if left[r] == 0 {
                st[r] = St::Done;
                running = None;
            }
        }
        // Best ready job: higher priority, then earlier release, then lower index.
        let best = (0..jobs.len())
            .filter(|&i| st[i] == St::Queued && jobs[i].release_min <= m)
            .min_by_key(|&i| (!jobs[i].high, jobs[i].release_min, i));
        match (running, best) {
            (None, Some(b)) => {
                st[b] = St::Running;
                running = Some(b);
            }
            (Some(r), Some(b)) if jobs[b].high && !jobs[r].high => {
                st[r] = St::Queued;
                st[b] = St::Running;
                running = Some(b);
            }
            _ => {}
        }
        trace.push(st.clone());
        if let Some(r) = running {
            left[r] -= 1;
        }
    }
    trace
}

fn st_of(s: &TaskStatus) -> St {
    match s {
        TaskStatus::Queued => St::Queued,
        TaskStatus::InProgress => St::Running,
        TaskStatus::Done => St::Done,
        TaskStatus::Failed { .. } => panic!("no task fails in these instances"),
    }
}

pub struct DrivenTrace {
    pub trace: Vec<Vec<St>>,
    /// Invariant violations seen at any processed instant.
    pub violations: Vec<String>,
}

/// Drive the real scheduler event to event (releases and completions only)
/// and expand the snapshots into a per-minute trace of the same length as
/// the brute force's.
pub fn drive_scheduler(jobs: &[Job], minutes: usize) -> DrivenTrace {
    let t0 = at(2010, 7, 5, 0, 0, 0);
    let mut catalog = TaskCatalog::new();
    for d in 1..=60u64 {
        catalog.insert(
            format!("d{d}").as_str(),
            CatalogEntry {
                name: format!("{d} minute job"),
                duration_s: d * 60,
                location: "anywhere".into(),
                restart_on_preempt: false,
            },
        );
    }
    let mut s = Scheduler::new(catalog);
    for j in jobs {
        s.add_task(
            format!("d{}", j.duration_min).as_str(),
            t0 + Duration::minutes(j.release_min as i64),
            if j.high { Priority::High } else { Priority::Normal },
        )
        .unwrap();
    }

    let mut snapshots: Vec<(NaiveDateTime, Vec<St>)> = Vec::new();
    let mut violations = Vec::new();
    let mut now = t0;
    let mut last = t0;
    loop {
        if let Some(id) = s.running() {
            let left = s.record_work(id, (now - last).num_seconds() as u64).unwrap();
            if left == 0 {
                s.finish_task(id, Outcome::Success).unwrap();
            }
        }
        last = now;
        loop {
            match s.tick(now) {
                Decision::Start { .. } | Decision::Preempt { .. } => continue,
                Decision::Continue { .. } | Decision::Idle => break,
            }
        }
        check_invariants(&s, now, &mut violations);
        let mut ids: Vec<_> = s.tasks().iter().collect();
        ids.sort_by_key(|t| t.id);
        snapshots.push((now, ids.iter().map(|t| st_of(&t.status)).collect()));

        let completion = s
            .running()
            .map(|id| now + Duration::seconds(s.task(id).unwrap().remaining_s as i64));
        let next = [s.next_release_after(now), completion].into_iter().flatten().min();
        match next {
            Some(t) => now = t,
            None => break,
        }
    }

    let mut trace = Vec::with_capacity(minutes);
    let mut k = 0;
    for m in 0..minutes {
        let t = t0 + Duration::minutes(m as i64);
        while k + 1 < snapshots.len() && snapshots[k + 1].0 <= t {
            k += 1;
        }
        trace.push(snapshots[k].1.clone());
    }
    DrivenTrace { trace, violations }
}

fn check_invariants(s: &Scheduler, now: NaiveDateTime, out: &mut Vec<String>) {
    let running: Vec<_> = s
        .tasks()
        .iter()
        .filter(|t| t.status == TaskStatus::InProgress)
        .collect();
    let ready: Vec<_> = s
        .tasks()
        .iter()
        .filter(|t| t.status == TaskStatus::Queued && t.scheduled_at <= now)
        .collect();
    if running.len() > 1 {
        out.push(format!("{now}: {} tasks running", running.len()));
    }
    if running.is_empty() && !ready.is_empty() {
        out.push(format!("{now}: idle with {} ready tasks", ready.len()));
    }
    if let Some(r) = running.first() {
        if ready.iter().any(|q| q.priority > r.priority) {
            out.push(format!("{now}: task {} runs below a ready higher priority", r.id));
        }
    }
}

// ---------------------------------------------------------------- worlds

/// A busy six-hour day touching every command and event kind, with a lossy
/// phone link. Used for determinism and persistence checks.
pub fn busy_day(seed: u64) -> (Scenario, WorldConfig, GridMap) {
    let mut r = rng(seed);
    let start = at(2010, 3, 1, 8, 0, 0);
    let end = start + Duration::hours(6);
    let mut items: Vec<(NaiveDateTime, Command)> = vec![
        (start, Command::AddPerson {
            name: "Mama".into(),
            face_tag: "face:mama".into(),
            photo_ref: "photos/mama.jpg".into(),
            telephone: String::new(),
            mobile: "+964 770 000 0001".into(),
        }),
        (start, Command::AddPerson {
            name: "Sister".into(),
            face_tag: "face:sister".into(),
            photo_ref: String::new(),
            telephone: String::new(),
            mobile: String::new(),
        }),
    ];
    let kinds = [
        "prepare_hamburger",
        "prepare_salad",
        "wash_dishes",
        "wake_up_alarm",
        "feed_baby_milk",
        "play_with_baby",
        "clean_house",
        "prepare_hot_tee",
    ];
    for i in 0..14 {
        let issued = start + Duration::minutes(r.random_range(0..300));
        let when = issued + Duration::minutes(r.random_range(0..40));
        items.push((issued, Command::AddTask {
            kind: kinds[i % kinds.len()].into(),
            scheduled_at: when,
            priority: if r.random_bool(0.3) { Priority::High } else { Priority::Normal },
        }));
    }
    let subjects = [Some("face:mama"), Some("face:sister"), Some("face:stranger"), None];
    for _ in 0..10 {
        let t = start + Duration::seconds(r.random_range(0..5 * 3600));
        let kind = ["DoorRing", "PhoneRing", "BabyCrying"][r.random_range(0..3)];
        let location = if kind == "BabyCrying" { "baby room" } else { "outside door" };
        items.push((t, Command::event(kind, location, subjects[r.random_range(0..4)])));
    }
    // Replies to whichever messages exist by then; some are late or garbage.
    for m in 0..8u64 {
        let t = start + Duration::seconds(r.random_range(0..5 * 3600));
        let text = ["1", "2", "3", " 2 ", "x", "9"][r.random_range(0..6)];
        items.push((t, Command::ReplySms { message: m, text: text.into() }));
    }
    for _ in 0..6 {
        let t = start + Duration::seconds(r.random_range(0..5 * 3600));
        let cell = CellChange {
            node: Node::new(r.random_range(1..19), r.random_range(13..22)),
            cell: Cell::Blocked,
        };
        let kind = if r.random_bool(0.5) { "ObstacleSeen" } else { "MovedFurniture" };
        items.push((t, Command::InjectEvent {
            kind: kind.into(),
            location: "hall".into(),
            subject: None,
            cells: vec![cell],
        }));
    }
    items.push((start + Duration::minutes(90), Command::SetPref { kind: "PhoneRing".into(), on: false }));
    items.push((start + Duration::minutes(200), Command::SetPref { kind: "PhoneRing".into(), on: true }));
    items.push((start + Duration::minutes(150), Command::event("Fire", "kitchen", None)));
    items.push((start + Duration::minutes(170), Command::CancelTask { task: 3 }));
    items.push((start + Duration::minutes(220), Command::set_cell(Node::new(5, 12), Cell::Blocked)));
    items.push((start + Duration::minutes(260), Command::set_cell(Node::new(5, 12), Cell::Walkable)));
    items.sort_by_key(|(t, _)| *t);

    let mut scenario = Scenario::new(start, end, seed);
    for (t, c) in items {
        scenario.push(t, c);
    }
    let mut config = fixtures::house_config();
    config.channel.drop_p = 0.3;
    (scenario, config, fixtures::house_map())
}
