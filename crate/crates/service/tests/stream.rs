//! Push channel over a real socket: every subscriber sees the same sequence.

use std::time::Duration;

use housekeeper::fixtures;
use housekeeper::World;
use housekeeper_service::api::{router, AppState};
use tokio::io::{AsyncBufReadExt, AsyncWriteExt, BufReader};
use tokio::net::{TcpListener, TcpStream};

/// Connect to `/stream` and return a reader positioned after the headers.
async fn subscribe(addr: std::net::SocketAddr) -> BufReader<TcpStream> {
    let mut sock = TcpStream::connect(addr).await.unwrap();
    sock.write_all(b"GET /stream HTTP/1.1\r\nHost: test\r\nAccept: text/event-stream\r\n\r\n")
        .await
        .unwrap();
    let mut reader = BufReader::new(sock);
    let mut line = String::new();
    loop {
        line.clear();
        reader.read_line(&mut line).await.unwrap();
        if line == "\r\n" {
            return reader;
        }
    }
}

/// Next SSE event as (name, data), skipping chunk framing and keep-alives.
async fn next_event(reader: &mut BufReader<TcpStream>) -> (String, String) {
    let (mut name, mut data) = (String::new(), String::new());
    let mut line = String::new();
    loop {
        line.clear();
        let n = tokio::time::timeout(Duration::from_secs(5), reader.read_line(&mut line))
            .await
            .expect("event within 5 s")
            .unwrap();
        assert!(n > 0, "stream closed");
        let l = line.trim_end_matches(['\r', '\n']);
        if let Some(v) = l.strip_prefix("event:") {
            name = v.trim().to_owned();
        } else if let Some(v) = l.strip_prefix("data:") {
            data.push_str(v.trim_start());
        } else if l.is_empty() && !name.is_empty() {
            return (name, data);
        }
    }
}

#[tokio::test]
async fn two_clients_receive_identical_sequences() {
    let scenario = fixtures::sms_scenario();
    let world = World::from_scenario(&scenario, fixtures::house_config(), fixtures::house_map()).unwrap();
    let state = AppState::new(world);
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let server = axum::serve(listener, router(state.clone()));
    tokio::spawn(async move { server.await.unwrap() });

    let mut a = subscribe(addr).await;
    let mut b = subscribe(addr).await;
    assert_eq!(next_event(&mut a).await.0, "hello");
    assert_eq!(next_event(&mut b).await.0, "hello");

    let records = state.advance_to(scenario.end);
    assert!(records.len() > 10);
    let mut seen_a = Vec::new();
    let mut seen_b = Vec::new();
    for _ in 0..records.len() {
        seen_a.push(next_event(&mut a).await);
        seen_b.push(next_event(&mut b).await);
    }
    assert_eq!(seen_a, seen_b);
    let want: Vec<(String, String)> = records
        .iter()
        .map(|r| ("record".to_owned(), r.to_json()))
        .collect();
    assert_eq!(seen_a, want);
}
