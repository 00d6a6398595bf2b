use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use linkgame_service::{router, AppState, ServiceConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app_with(config: ServiceConfig) -> Router {
    router(AppState::new(config).unwrap())
}

fn app() -> Router {
    app_with(ServiceConfig::default())
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let request = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let request = match body {
        Some(b) => request.body(Body::from(b.to_string())).unwrap(),
        None => request.body(Body::empty()).unwrap(),
    };
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap_or(Value::Null) };
    (status, value)
}

async fn create(app: &Router, body: Value) -> Value {
    let (status, v) = call(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v
}

async fn play(app: &Router, id: &str, crossing: usize, resolution: &str, version: u64) -> (StatusCode, Value) {
    let body = json!({ "crossing": crossing, "resolution": resolution, "version": version });
    call(app, "POST", &format!("/sessions/{id}/moves"), Some(body)).await
}

fn id_of(v: &Value) -> String {
    v["state"]["id"].as_str().unwrap().to_string()
}

fn code(v: &Value) -> &str {
    v["error"]["code"].as_str().unwrap()
}

#[tokio::test]
async fn whitehead_preset_board() {
    let app = app();
    let v = create(&app, json!({ "preset": "whitehead", "human": "unlinker", "first": "unlinker" })).await;
    let s = &v["state"];
    assert_eq!(s["crossings"].as_array().unwrap().len(), 5);
    assert!(s["crossings"].as_array().unwrap().iter().all(|c| c["state"] == "?" && c["x"].is_number()));
    assert_eq!(s["crossings"][0]["kind"], "si");
    assert_eq!(s["mover"], "unlinker");
    assert_eq!(s["version"], 0);
    assert_eq!(s["plk"], 0.0);
    assert!(s["outcome"].is_null());
    let labels: Vec<&str> = s["arcs"].as_array().unwrap().iter().map(|a| a["label"].as_str().unwrap()).collect();
    assert!(labels.contains(&"red") && labels.contains(&"blue"));
    assert!(v["engine_reply"].is_null());
}

#[tokio::test]
async fn word_boards_and_knot_closure() {
    let app = app();
    let v = create(&app, json!({ "word": "(2)", "closure": "denominator", "human": "unlinker", "first": "unlinker" })).await;
    assert_eq!(v["state"]["crossings"].as_array().unwrap().len(), 2);
    let (status, v) = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({ "word": "(1,1)", "closure": "denominator", "human": "unlinker", "first": "unlinker" })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(code(&v), "unsupported_components");
    let (status, v) = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({ "preset": "whitehead", "word": "(2)", "human": "linker", "first": "linker" })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(code(&v), "invalid_payload");
}

#[tokio::test]
async fn sample_game_with_scripted_linker() {
    let app = app();
    let engine =
        json!({ "policy": "scripted", "moves": [{ "crossing": 1, "resolution": "/" }, { "crossing": 3, "resolution": "/" }] });
    let v = create(&app, json!({ "preset": "whitehead", "human": "unlinker", "first": "unlinker", "engine": engine })).await;
    let id = id_of(&v);
    let mut version = 0;
    let mut plks = Vec::new();
    for (c, r) in [(0, "/"), (2, "\\"), (4, "\\")] {
        let (status, v) = play(&app, &id, c, r, version).await;
        assert_eq!(status, StatusCode::OK, "{v}");
        version = v["state"]["version"].as_u64().unwrap();
        plks.push(v["state"]["plk_halves"].as_i64().unwrap());
        if c != 4 {
            assert_eq!(v["engine_reply"]["source"], "scripted");
        }
    }
    let (_, s) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(s["version"], 5);
    assert!(s["mover"].is_null());
    assert_eq!(s["outcome"]["winner"], "unlinker");
    assert_eq!(s["plk_halves"].as_i64().unwrap(), *plks.last().unwrap());
}

#[tokio::test]
async fn rejected_moves() {
    let app = app();
    let v = create(
        &app,
        json!({ "preset": "whitehead", "human": "unlinker", "first": "unlinker", "engine": { "policy": "lowest" } }),
    )
    .await;
    let id = id_of(&v);
    let (status, v) = play(&app, &id, 0, "/", 0).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["engine_reply"]["source"], "fallback");
    assert_eq!(v["engine_reply"]["move"]["crossing"], 1);
    let (status, v) = play(&app, &id, 0, "\\", 2).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(code(&v), "illegal_move");
    let (status, v) = play(&app, &id, 2, "/", 1).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(code(&v), "stale_version");
    let (status, v) = play(&app, &id, 2, "x", 2).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(code(&v), "illegal_move");
    let (status, v) = play(&app, &id, 9, "/", 2).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
}

#[tokio::test]
async fn resubmitted_move_is_not_played_twice() {
    let app = app();
    let v = create(
        &app,
        json!({ "preset": "whitehead", "human": "unlinker", "first": "unlinker", "engine": { "policy": "lowest" } }),
    )
    .await;
    let id = id_of(&v);
    let (a, b) = tokio::join!(play(&app, &id, 0, "/", 0), play(&app, &id, 0, "/", 0));
    assert_eq!((a.0, b.0), (StatusCode::OK, StatusCode::OK));
    assert_eq!(a.1["state"], b.1["state"]);
    assert_ne!(a.1["replayed"], b.1["replayed"]);
    assert_eq!(a.1["engine_reply"], b.1["engine_reply"]);
    let (_, s) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(s["version"], 2);
}

#[tokio::test]
async fn linking_engine_copies_the_sign() {
    let app = app();
    let body = json!({
        "word": "(4)", "closure": "denominator", "human": "unlinker", "first": "unlinker",
        "engine": { "policy": "strategy", "id": "linking-second" }
    });
    let v = create(&app, body).await;
    assert_eq!(v["state"]["engine_strategy"], "linking-second");
    let id = id_of(&v);
    let (status, v) = play(&app, &id, 0, "/", 0).await;
    assert_eq!(status, StatusCode::OK);
    let reply = &v["engine_reply"];
    assert_eq!(reply["source"], "strategy");
    assert!(reply["rationale"].as_str().unwrap().contains("copy the sign"));
    let c = reply["move"]["crossing"].as_u64().unwrap() as usize;
    let crossings = &v["state"]["crossings"];
    assert_eq!(crossings[c]["sign"], crossings[0]["sign"]);
    assert_eq!(v["state"]["plk_halves"].as_i64().unwrap().abs(), 2);
    let free = crossings.as_array().unwrap().iter().find(|x| x["state"] == "?").unwrap()["id"].as_u64().unwrap();
    let (status, v) = play(&app, &id, free as usize, "/", 2).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert!(v["engine_reply"]["rationale"].as_str().unwrap().contains("oppose the sign"));
    assert_eq!(v["state"]["plk_halves"].as_i64().unwrap().abs(), 2);
    assert_eq!(v["state"]["outcome"]["winner"], "linker");
}

#[tokio::test]
async fn hint_is_an_r2_response() {
    let app = app();
    let body = json!({
        "word": "(4)", "closure": "denominator", "human": "unlinker", "first": "linker",
        "engine": { "policy": "scripted", "moves": [{ "crossing": 2, "resolution": "/" }] }
    });
    let v = create(&app, body).await;
    assert_eq!(v["engine_reply"]["move"]["crossing"], 2);
    let id = id_of(&v);
    let (status, hint) = call(&app, "GET", &format!("/sessions/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::OK, "{hint}");
    assert_eq!(hint["source"], "strategy");
    assert_eq!(hint["strategy"], "even-second");
    assert!(hint["rationale"].as_str().unwrap().starts_with("R2 response"));
    assert_eq!(hint["move"], json!({ "crossing": 0, "resolution": "\\" }));
    let (status, v) = play(&app, &id, 0, "\\", 1).await;
    assert_eq!(status, StatusCode::OK);
    let crossings = &v["state"]["crossings"];
    assert_eq!(crossings[0]["sign"].as_i64().unwrap(), -crossings[2]["sign"].as_i64().unwrap());
}

#[tokio::test]
async fn analysis_of_a_two_crossing_board() {
    let app = app();
    let v = create(&app, json!({ "word": "(2)", "closure": "denominator", "human": "unlinker", "first": "unlinker" })).await;
    let id = id_of(&v);
    let (status, a) = call(&app, "GET", &format!("/sessions/{id}/analysis"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(a["summary"], "second mover (Linker) wins");
    assert_eq!(a["winner"], "second_mover");
    assert_eq!(a["unknown_influence"], false);
    assert_eq!(a["principal_variation"].as_array().unwrap().len(), 2);

    let small = app_with(ServiceConfig { analysis_bound: 1, ..ServiceConfig::default() });
    let v = create(&small, json!({ "word": "(2)", "closure": "denominator", "human": "unlinker", "first": "unlinker" })).await;
    let (status, e) = call(&small, "GET", &format!("/sessions/{}/analysis", id_of(&v)), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(code(&e), "analysis_bound_exceeded");
}

#[tokio::test]
async fn game_over_and_unknown_sessions() {
    let app = app();
    let v = create(&app, json!({ "word": "(2)", "closure": "denominator", "human": "unlinker", "first": "unlinker" })).await;
    let id = id_of(&v);
    let (_, v) = play(&app, &id, 0, "/", 0).await;
    assert!(v["state"]["outcome"].is_object());
    let (status, e) = play(&app, &id, 1, "/", 2).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(code(&e), "game_over");
    let (status, e) = call(&app, "GET", &format!("/sessions/{id}/hint"), None).await;
    assert_eq!((status, code(&e)), (StatusCode::CONFLICT, "game_over"));
    let (status, e) = call(&app, "GET", "/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(code(&e), "session_not_found");
}

#[tokio::test]
async fn expired_session_is_not_found() {
    let app = app_with(ServiceConfig { ttl: Some(Duration::ZERO), ..ServiceConfig::default() });
    let v = create(&app, json!({ "preset": "hopf", "human": "linker", "first": "unlinker" })).await;
    tokio::time::sleep(Duration::from_millis(5)).await;
    let (status, e) = call(&app, "GET", &format!("/sessions/{}", id_of(&v)), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(code(&e), "session_not_found");
}

#[tokio::test]
async fn sessions_are_isolated() {
    let app = app();
    let body = json!({ "preset": "whitehead", "human": "unlinker", "first": "unlinker" });
    let a = id_of(&create(&app, body.clone()).await);
    let b = id_of(&create(&app, body).await);
    assert_ne!(a, b);
    play(&app, &a, 0, "/", 0).await;
    let (_, sa) = call(&app, "GET", &format!("/sessions/{a}"), None).await;
    let (_, sb) = call(&app, "GET", &format!("/sessions/{b}"), None).await;
    assert_eq!(sa["version"], 2);
    assert_eq!(sb["version"], 0);
}

#[tokio::test]
async fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let config = ServiceConfig { data_dir: Some(dir.path().to_path_buf()), ..ServiceConfig::default() };
    let app = app_with(config.clone());
    let w = id_of(&create(&app, json!({ "preset": "whitehead", "human": "unlinker", "first": "unlinker" })).await);
    let r =
        id_of(&create(&app, json!({ "word": "(4)", "closure": "denominator", "human": "linker", "first": "unlinker" })).await);
    let (_, before) = play(&app, &w, 0, "/", 0).await;
    let (_, r_before) = call(&app, "GET", &format!("/sessions/{r}"), None).await;
    assert_eq!(r_before["version"], 1);
    drop(app);

    let state = AppState::new(config).unwrap();
    assert_eq!(state.session_count(), 2);
    let app = router(state);
    let (status, after) = call(&app, "GET", &format!("/sessions/{w}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after["history"], before["state"]["history"]);
    assert_eq!(after["crossings"], before["state"]["crossings"]);
    let (_, r_after) = call(&app, "GET", &format!("/sessions/{r}"), None).await;
    assert_eq!(r_after["history"], r_before["history"]);
    let (status, _) = play(&app, &w, 2, "/", 2).await;
    assert_eq!(status, StatusCode::OK);
    let log = std::fs::read_to_string(dir.path().join(format!("{w}.log"))).unwrap();
    assert_eq!(log.lines().filter(|l| l.starts_with("m ")).count(), 4);
}
