use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::extract::extract_turtle;
use crate::prompt::PromptBundle;
use crate::LlmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LlmMode {
    Live,
    #[default]
    Replay,
}

impl std::str::FromStr for LlmMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "live" => Ok(LlmMode::Live),
            "replay" => Ok(LlmMode::Replay),
            other => Err(format!("unknown LLM mode {other:?} (expected live or replay)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LlmClientConfig {
    pub endpoint_url: String,
    pub model_name: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env_var: String,
    pub temperature: f64,
    pub max_retries: u32,
    pub timeout_secs: u64,
    pub mode: LlmMode,
    /// Replay reads `<prompt hash>.txt` from here. In live mode, responses
    /// are recorded here when set.
    pub fixtures_dir: Option<PathBuf>,
}

impl Default for LlmClientConfig {
    fn default() -> Self {
        LlmClientConfig {
            endpoint_url: "https://api.openai.com/v1/chat/completions".into(),
            model_name: "gpt-4.1-2025-04-14".into(),
            api_key_env_var: "OPENAI_API_KEY".into(),
            temperature: 0.0,
            max_retries: 2,
            timeout_secs: 120,
            mode: LlmMode::Replay,
            fixtures_dir: None,
        }
    }
}

impl LlmClientConfig {
    pub fn validate(&self) -> Result<(), LlmError> {
        match self.mode {
            LlmMode::Replay if self.fixtures_dir.is_none() => {
                Err(LlmError::Config("replay mode needs a fixtures directory".into()))
            }
            LlmMode::Live if std::env::var_os(&self.api_key_env_var).is_none() => Err(LlmError::Config(format!(
                "live mode needs the API key in ${}",
                self.api_key_env_var
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn new(role: &str, content: impl Into<String>) -> Self {
        ChatMessage {
            role: role.into(),
            content: content.into(),
        }
    }
}

pub fn bundle_messages(bundle: &PromptBundle) -> Vec<ChatMessage> {
    vec![
        ChatMessage::new("system", bundle.system_text.clone()),
        ChatMessage::new("user", bundle.user_text.clone()),
    ]
}

/// SHA-256 over the roles and contents of the conversation. The model name
/// and sampling settings are not part of the key.
pub fn prompt_hash(messages: &[ChatMessage]) -> String {
    let mut h = Sha256::new();
    for m in messages {
        h.update(m.role.as_bytes());
        h.update([0]);
        h.update(m.content.as_bytes());
        h.update([0]);
    }
    hex::encode(h.finalize())
}

/// One prompt's trip through the model, including retries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LlmExchange {
    /// Hash of the first request.
    pub prompt_hash: String,
    /// Final response text.
    pub raw_response: String,
    /// The accepted Turtle, when the exchange produced shapes.
    pub extracted: Option<String>,
    pub attempts: u32,
    /// `(prompt hash, raw response)` per request, in order.
    pub calls: Vec<(String, String)>,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: &'a [ChatMessage],
    temperature: f64,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChatMessage,
}

fn fixture_path(dir: &Path, hash: &str) -> PathBuf {
    dir.join(format!("{hash}.txt"))
}

/// Send one conversation and return the response text.
pub fn complete_messages(messages: &[ChatMessage], cfg: &LlmClientConfig) -> Result<String, LlmError> {
    cfg.validate()?;
    let hash = prompt_hash(messages);
    match cfg.mode {
        LlmMode::Replay => {
            let dir = cfg.fixtures_dir.as_deref().expect("validated");
            std::fs::read_to_string(fixture_path(dir, &hash)).map_err(|_| LlmError::MissingFixture(hash))
        }
        LlmMode::Live => {
            let text = post(messages, cfg)?;
            if let Some(dir) = &cfg.fixtures_dir {
                std::fs::create_dir_all(dir).map_err(|e| LlmError::Io(e.to_string()))?;
                std::fs::write(fixture_path(dir, &hash), &text).map_err(|e| LlmError::Io(e.to_string()))?;
            }
            Ok(text)
        }
    }
}

fn post(messages: &[ChatMessage], cfg: &LlmClientConfig) -> Result<String, LlmError> {
    let key = std::env::var(&cfg.api_key_env_var)
        .map_err(|_| LlmError::Config(format!("${} is not set", cfg.api_key_env_var)))?;
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(cfg.timeout_secs))
        .build()
        .map_err(|e| LlmError::Network(e.to_string()))?;
    let response = client
        .post(&cfg.endpoint_url)
        .bearer_auth(key)
        .json(&ChatRequest {
            model: &cfg.model_name,
            messages,
            temperature: cfg.temperature,
        })
        .send()
        .map_err(|e| {
            if e.is_timeout() {
                LlmError::Timeout
            } else {
                LlmError::Network(e.to_string())
            }
        })?;
    let status = response.status();
    if !status.is_success() {
        let body = response.text().unwrap_or_default();
        return Err(LlmError::HttpStatus {
            code: status.as_u16(),
            body,
        });
    }
    let body: ChatResponse = response.json().map_err(|e| LlmError::BadResponse(e.to_string()))?;
    body.choices
        .into_iter()
        .next()
        .map(|c| c.message.content)
        .ok_or_else(|| LlmError::BadResponse("response has no choices".into()))
}

/// Send a prompt whose answer is free text (no retries).
pub fn complete(bundle: &PromptBundle, cfg: &LlmClientConfig) -> Result<LlmExchange, LlmError> {
    let messages = bundle_messages(bundle);
    let hash = prompt_hash(&messages);
    let text = complete_messages(&messages, cfg)?;
    Ok(LlmExchange {
        prompt_hash: hash.clone(),
        raw_response: text.clone(),
        extracted: None,
        attempts: 1,
        calls: vec![(hash, text)],
    })
}

pub const CORRECTIVE_INSTRUCTION: &str =
    "Output only valid Turtle: all prefixes declared, no prose, no Markdown, no code fences.";

/// Ask for Turtle until `accept` takes it, at most `max_retries + 1` calls.
///
/// A response without extractable Turtle, or one `accept` rejects, is
/// appended to the conversation as the assistant turn followed by a
/// corrective user message naming the problem.
pub fn generate_turtle<T>(
    bundle: &PromptBundle,
    cfg: &LlmClientConfig,
    mut accept: impl FnMut(&str) -> Result<T, String>,
) -> Result<(T, LlmExchange), LlmError> {
    let mut messages = bundle_messages(bundle);
    let first_hash = prompt_hash(&messages);
    let mut calls = Vec::new();
    let mut reason = String::new();
    for attempt in 1..=cfg.max_retries + 1 {
        let hash = prompt_hash(&messages);
        let text = complete_messages(&messages, cfg)?;
        calls.push((hash, text.clone()));
        match extract_turtle(&text) {
            Some(ttl) => match accept(&ttl) {
                Ok(v) => {
                    return Ok((
                        v,
                        LlmExchange {
                            prompt_hash: first_hash,
                            raw_response: text,
                            extracted: Some(ttl),
                            attempts: attempt,
                            calls,
                        },
                    ))
                }
                Err(r) => reason = r,
            },
            None => reason = "the answer contained no parseable Turtle".into(),
        }
        messages.push(ChatMessage::new("assistant", text));
        messages.push(ChatMessage::new(
            "user",
            format!("Your previous answer was not usable: {reason}. {CORRECTIVE_INSTRUCTION}"),
        ));
    }
    Err(LlmError::NoTurtleFound {
        attempts: cfg.max_retries + 1,
        reason,
        calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        let m = [ChatMessage::new("system", "s"), ChatMessage::new("user", "u")];
        // sha256 of "system\0s\0user\0u\0", computed with Python's hashlib
        assert_eq!(
            prompt_hash(&m),
            "1643a1f84e107da4cc368e23f6d6aa260ecbd668501eba6cdb01ea9bd14ed644"
        );
        assert_ne!(prompt_hash(&m), prompt_hash(&m[..1]));
    }

    #[test]
    fn replay_without_fixture_dir_is_a_config_error() {
        let cfg = LlmClientConfig::default();
        assert!(matches!(cfg.validate(), Err(LlmError::Config(_))));
    }

    #[test]
    fn live_without_key_fails_before_network() {
        let cfg = LlmClientConfig {
            mode: LlmMode::Live,
            api_key_env_var: "AMLSHACL_SURELY_UNSET_KEY".into(),
            endpoint_url: "http://127.0.0.1:9/".into(),
            ..Default::default()
        };
        let err = complete_messages(&[ChatMessage::new("user", "x")], &cfg).unwrap_err();
        assert!(matches!(err, LlmError::Config(m) if m.contains("AMLSHACL_SURELY_UNSET_KEY")));
    }

    #[test]
    fn replay_missing_fixture() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = LlmClientConfig {
            fixtures_dir: Some(dir.path().into()),
            ..Default::default()
        };
        let m = [ChatMessage::new("user", "x")];
        assert_eq!(
            complete_messages(&m, &cfg),
            Err(LlmError::MissingFixture(prompt_hash(&m)))
        );
    }
}
