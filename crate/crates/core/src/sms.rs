//! The SMS center: Emergency- and Reaction-SMS, reply windows, default
//! reactions and the audit log shown on the "SMS Center" page.
//!
//! Every Reaction-SMS opens a [`PendingInteraction`] that resolves exactly
//! once: either to the option the user picked with a valid reply arriving no
//! later than the deadline, or to the default option at the deadline.
//! Emergency-SMS need no answer and are logged as resolved on the spot.

use std::collections::BTreeMap;

use chrono::{Duration, NaiveDateTime};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::events::{
    EmergencyRequest, EventClass, EventId, EventKind, EventTable, HouseEvent, ReactionOption,
    ReactionRequest,
};
use crate::sim::channel::{Delivery, WirelessChannel};

pub type MessageId = u64;

pub const NO_ACTION_RECEIVED: &str = "No action received";
pub const NO_ACTION_NEEDED: &str = "No action needed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmsType {
    Emergency,
    Reaction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmsMessage {
    pub id: MessageId,
    pub sent_at: NaiveDateTime,
    pub sms_type: SmsType,
    pub info: String,
    /// Empty for Emergency-SMS.
    pub options: Vec<ReactionOption>,
    pub event_id: EventId,
    pub event_kind: EventKind,
    /// Reply window; `None` for Emergency-SMS.
    pub window_s: Option<u64>,
}

impl SmsMessage {
    /// The text as it appears on the user's phone.
    pub fn body(&self) -> String {
        let mut body = self.info.clone();
        for o in &self.options {
            body.push_str(&format!("\n{}. {}", o.number, o.label));
        }
        body
    }
}

/// What the center was asked to send.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SmsRequest {
    Emergency(EmergencyRequest),
    Reaction(ReactionRequest),
}

/// Per-kind switch for Reaction-SMS. Kinds never mentioned are on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubscriptionPrefs {
    kinds: BTreeMap<EventKind, bool>,
}

impl SubscriptionPrefs {
    /// Whether a Reaction-SMS of this kind should go out. Emergency kinds
    /// ignore this entirely.
    pub fn is_on(&self, kind: &EventKind) -> bool {
        self.kinds.get(kind).copied().unwrap_or(true)
    }

    /// Effective switch for every kind in the table.
    pub fn effective(&self, table: &EventTable) -> BTreeMap<EventKind, bool> {
        table
            .kinds
            .iter()
            .map(|(k, spec)| {
                let on = spec.class == EventClass::Emergency || self.is_on(k);
                (k.clone(), on)
            })
            .collect()
    }

    pub fn check(&self, table: &EventTable, kind: &EventKind, on: bool) -> Result<(), SmsError> {
        let class = table
            .class_of(kind)
            .map_err(|_| SmsError::UnknownKind(kind.clone()))?;
        if class == EventClass::Emergency && !on {
            return Err(SmsError::EmergencyImmutable(kind.clone()));
        }
        Ok(())
    }

    pub fn set_subscription(
        &mut self,
        table: &EventTable,
        kind: &EventKind,
        on: bool,
    ) -> Result<&Self, SmsError> {
        self.check(table, kind, on)?;
        if on {
            self.kinds.remove(kind);
        } else {
            self.kinds.insert(kind.clone(), false);
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmsLogEntry {
    pub message_id: MessageId,
    pub sent_at: NaiveDateTime,
    pub sms_sent: String,
    /// Empty while the interaction is still open.
    pub action_received: String,
    pub action_done: String,
}

/// The five columns of the SMS Center page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmsLogRow {
    pub date: String,
    pub time: String,
    pub sms_sent: String,
    pub action_received: String,
    pub action_done: String,
}

impl SmsLogEntry {
    pub fn row(&self) -> SmsLogRow {
        SmsLogRow {
            date: self.sent_at.format("%d / %m / %Y").to_string(),
            time: self.sent_at.format("%I:%M %p").to_string(),
            sms_sent: self.sms_sent.clone(),
            action_received: self.action_received.clone(),
            action_done: self.action_done.clone(),
        }
    }
}

impl std::fmt::Display for SmsLogRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.date, self.time, self.sms_sent, self.action_received, self.action_done
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplyAt {
    pub at: NaiveDateTime,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum InteractionState {
    AwaitingReply,
    Resolved { option: u32 },
    TimedOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendingInteraction {
    pub message_id: MessageId,
    pub deadline: NaiveDateTime,
    pub default_option: u32,
    pub options: Vec<ReactionOption>,
    pub state: InteractionState,
    /// False when the channel lost the message; the user cannot answer it.
    pub delivered: bool,
}

/// The single execution of one option for one interaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub message_id: MessageId,
    pub option: ReactionOption,
    pub by_default: bool,
    pub at: NaiveDateTime,
    pub action_received: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmsError {
    #[error("no message with id {0}")]
    UnknownMessage(MessageId),
    #[error("message {0} does not take replies")]
    NoReplyExpected(MessageId),
    #[error("message {0} is already resolved")]
    AlreadyResolved(MessageId),
    #[error("unknown event kind `{0}`")]
    UnknownKind(EventKind),
    #[error("Emergency-SMS for `{0}` cannot be switched off")]
    EmergencyImmutable(EventKind),
}

/// Interpret a reply body: the trimmed text must be a base-10 number in `1..=options`.
pub fn parse_reply(text: &str, options: usize) -> Option<u32> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: u32 = t.parse().ok()?;
    (n >= 1 && (n as usize) <= options).then_some(n)
}

impl PendingInteraction {
    pub fn is_open(&self) -> bool {
        self.state == InteractionState::AwaitingReply
    }

    /// Settle the interaction. A valid reply no later than the deadline picks
    /// its option; anything else (no reply, garbage, too late) runs the
    /// default option at the deadline.
    pub fn resolve(&mut self, arrival: Option<&ReplyAt>) -> Result<Resolution, SmsError> {
        if !self.is_open() {
            return Err(SmsError::AlreadyResolved(self.message_id));
        }
        let chosen = arrival.and_then(|r| {
            let n = parse_reply(&r.text, self.options.len())?;
            (r.at <= self.deadline).then_some((n, r.at))
        });
        let resolution = match chosen {
            Some((n, at)) => {
                self.state = InteractionState::Resolved { option: n };
                let option = self.option(n).clone();
                Resolution {
                    message_id: self.message_id,
                    action_received: option.label.clone(),
                    option,
                    by_default: false,
                    at,
                }
            }
            None => {
                self.state = InteractionState::TimedOut;
                Resolution {
                    message_id: self.message_id,
                    option: self.option(self.default_option).clone(),
                    by_default: true,
                    at: self.deadline,
                    action_received: NO_ACTION_RECEIVED.to_owned(),
                }
            }
        };
        Ok(resolution)
    }

    fn option(&self, number: u32) -> &ReactionOption {
        self.options
            .iter()
            .find(|o| o.number == number)
            .expect("option numbers are 1..=n")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Dispatch {
    Sent {
        message: SmsMessage,
        delivery: Delivery,
    },
    /// The user switched this kind off; the default reaction ran at once.
    Suppressed { resolution: Resolution },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IgnoreReason {
    InvalidText,
    NotDelivered,
    AlreadyResolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IgnoredReply {
    pub message_id: MessageId,
    pub reply: ReplyAt,
    pub reason: IgnoreReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ReplyOutcome {
    Resolved { resolution: Resolution },
    Ignored { reason: IgnoreReason },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmsCenter {
    prefs: SubscriptionPrefs,
    messages: Vec<SmsMessage>,
    log: Vec<SmsLogEntry>,
    interactions: BTreeMap<MessageId, PendingInteraction>,
    ignored: Vec<IgnoredReply>,
    next_id: MessageId,
}

impl SmsCenter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn prefs(&self) -> &SubscriptionPrefs {
        &self.prefs
    }

    pub fn prefs_mut(&mut self) -> &mut SubscriptionPrefs {
        &mut self.prefs
    }

    pub fn messages(&self) -> &[SmsMessage] {
        &self.messages
    }

    pub fn message(&self, id: MessageId) -> Option<&SmsMessage> {
        self.messages.iter().find(|m| m.id == id)
    }

    pub fn interaction(&self, id: MessageId) -> Option<&PendingInteraction> {
        self.interactions.get(&id)
    }

    /// Interactions still waiting for an answer, by message id.
    pub fn open_interactions(&self) -> impl Iterator<Item = &PendingInteraction> {
        self.interactions.values().filter(|i| i.is_open())
    }

    /// Replies that were received but did not count.
    pub fn ignored_replies(&self) -> &[IgnoredReply] {
        &self.ignored
    }

    pub fn sms_log(&self) -> &[SmsLogEntry] {
        &self.log
    }

    pub fn sms_log_rows(&self) -> Vec<SmsLogRow> {
        self.log.iter().map(SmsLogEntry::row).collect()
    }

    /// Send (or suppress) the SMS an event asks for.
    pub fn dispatch(
        &mut self,
        event: &HouseEvent,
        request: SmsRequest,
        channel: &mut WirelessChannel,
        now: NaiveDateTime,
    ) -> Dispatch {
        let id = self.next_id;
        match request {
            SmsRequest::Emergency(req) => {
                let message = SmsMessage {
                    id,
                    sent_at: now,
                    sms_type: SmsType::Emergency,
                    info: req.info.clone(),
                    options: Vec::new(),
                    event_id: event.id,
                    event_kind: event.kind.clone(),
                    window_s: None,
                };
                self.next_id += 1;
                let delivery = channel.send(now);
                self.log.push(SmsLogEntry {
                    message_id: id,
                    sent_at: now,
                    sms_sent: req.info,
                    action_received: NO_ACTION_NEEDED.to_owned(),
                    action_done: req.done,
                });
                self.messages.push(message.clone());
                Dispatch::Sent { message, delivery }
            }
            SmsRequest::Reaction(req) => {
                let default_option = req.default_option().number;
                if !self.prefs.is_on(&event.kind) {
                    let option = req.default_option().clone();
                    return Dispatch::Suppressed {
                        resolution: Resolution {
                            message_id: id,
                            option,
                            by_default: true,
                            at: now,
                            action_received: NO_ACTION_RECEIVED.to_owned(),
                        },
                    };
                }
                self.next_id += 1;
                let message = SmsMessage {
                    id,
                    sent_at: now,
                    sms_type: SmsType::Reaction,
                    info: req.info.clone(),
                    options: req.options.clone(),
                    event_id: event.id,
                    event_kind: event.kind.clone(),
                    window_s: Some(req.window_s),
                };
                let delivery = channel.send(now);
                self.interactions.insert(
                    id,
                    PendingInteraction {
                        message_id: id,
                        deadline: now + Duration::seconds(req.window_s as i64),
                        default_option,
                        options: req.options,
                        state: InteractionState::AwaitingReply,
                        delivered: delivery != Delivery::Dropped,
                    },
                );
                self.log.push(SmsLogEntry {
                    message_id: id,
                    sent_at: now,
                    sms_sent: req.info,
                    action_received: String::new(),
                    action_done: String::new(),
                });
                self.messages.push(message.clone());
                Dispatch::Sent { message, delivery }
            }
        }
    }

    /// Check whether a reply to `id` would be accepted for processing,
    /// without changing anything.
    pub fn check_reply(&self, id: MessageId) -> Result<(), SmsError> {
        let message = self.message(id).ok_or(SmsError::UnknownMessage(id))?;
        if message.sms_type == SmsType::Emergency {
            return Err(SmsError::NoReplyExpected(id));
        }
        match self.interactions.get(&id) {
            Some(i) if i.is_open() => Ok(()),
            _ => Err(SmsError::AlreadyResolved(id)),
        }
    }

    /// Handle a reply that reached the robot at `reply.at`.
    pub fn reply(&mut self, id: MessageId, reply: ReplyAt) -> Result<ReplyOutcome, SmsError> {
        if let Err(e) = self.check_reply(id) {
            if matches!(e, SmsError::AlreadyResolved(_)) {
                self.ignore(id, reply, IgnoreReason::AlreadyResolved);
            }
            return Err(e);
        }
        let interaction = self.interactions.get_mut(&id).expect("checked above");
        if !interaction.delivered {
            self.ignore(id, reply, IgnoreReason::NotDelivered);
            return Ok(ReplyOutcome::Ignored {
                reason: IgnoreReason::NotDelivered,
            });
        }
        let valid = parse_reply(&reply.text, interaction.options.len()).is_some();
        if !valid {
            self.ignore(id, reply, IgnoreReason::InvalidText);
            return Ok(ReplyOutcome::Ignored {
                reason: IgnoreReason::InvalidText,
            });
        }
        let resolution = interaction.resolve(Some(&reply))?;
        self.record(&resolution);
        Ok(ReplyOutcome::Resolved { resolution })
    }

    /// Earliest deadline among open interactions.
    pub fn next_deadline(&self) -> Option<NaiveDateTime> {
        self.open_interactions().map(|i| i.deadline).min()
    }

    /// Resolve every open interaction whose deadline is at or before `now`
    /// with its default option, ordered by deadline then message id.
    pub fn expire_due(&mut self, now: NaiveDateTime) -> Vec<Resolution> {
        let mut due: Vec<(NaiveDateTime, MessageId)> = self
            .open_interactions()
            .filter(|i| i.deadline <= now)
            .map(|i| (i.deadline, i.message_id))
            .collect();
        due.sort();
        due.into_iter()
            .map(|(_, id)| {
                let res = self
                    .interactions
                    .get_mut(&id)
                    .expect("listed above")
                    .resolve(None)
                    .expect("interaction was open");
                self.record(&res);
                res
            })
            .collect()
    }

    fn record(&mut self, res: &Resolution) {
        if let Some(entry) = self.log.iter_mut().find(|e| e.message_id == res.message_id) {
            entry.action_received = res.action_received.clone();
            entry.action_done = res.option.done.clone();
        }
    }

    fn ignore(&mut self, message_id: MessageId, reply: ReplyAt, reason: IgnoreReason) {
        self.ignored.push(IgnoredReply {
            message_id,
            reply,
            reason,
        });
    }
}
