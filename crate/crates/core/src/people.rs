//! Known people and visitor identification.
//!
//! Face recognition itself is outside this crate: whatever recognizer sits
//! in front of the cameras hands us an opaque [`FaceTag`], and identification
//! is an exact match against the registered tags.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type PersonId = u64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceTag(pub String);

impl FaceTag {
    pub fn new(tag: impl Into<String>) -> Self {
        FaceTag(tag.into())
    }
}

impl fmt::Display for FaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FaceTag {
    fn from(s: &str) -> Self {
        FaceTag(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Person {
    pub id: PersonId,
    pub name: String,
    pub face_tag: FaceTag,
    /// Path of the person's photo. Never opened.
    pub photo_ref: String,
    pub telephone: String,
    pub mobile: String,
}

/// Input to [`PersonRegistry::add_person`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewPerson {
    pub name: String,
    pub face_tag: FaceTag,
    #[serde(default)]
    pub photo_ref: String,
    #[serde(default)]
    pub telephone: String,
    #[serde(default)]
    pub mobile: String,
}

impl NewPerson {
    pub fn new(name: impl Into<String>, face_tag: impl Into<FaceTag>) -> Self {
        NewPerson {
            name: name.into(),
            face_tag: face_tag.into(),
            photo_ref: String::new(),
            telephone: String::new(),
            mobile: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Identification {
    Known { person: Person },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("face tag `{0}` is already registered")]
    DuplicateFaceTag(FaceTag),
    #[error("person {0} not found")]
    NotFound(PersonId),
    #[error("a person needs a name")]
    EmptyName,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonRegistry {
    people: BTreeMap<PersonId, Person>,
    next_id: PersonId,
}

impl PersonRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Check that `person` could be added without mutating anything.
    pub fn validate(&self, person: &NewPerson) -> Result<(), RegistryError> {
        if person.name.trim().is_empty() {
            return Err(RegistryError::EmptyName);
        }
        if self.by_tag(&person.face_tag).is_some() {
            return Err(RegistryError::DuplicateFaceTag(person.face_tag.clone()));
        }
        Ok(())
    }

    pub fn add_person(&mut self, person: NewPerson) -> Result<PersonId, RegistryError> {
        self.validate(&person)?;
        let id = self.next_id;
        self.next_id += 1;
        self.people.insert(
            id,
            Person {
                id,
                name: person.name,
                face_tag: person.face_tag,
                photo_ref: person.photo_ref,
                telephone: person.telephone,
                mobile: person.mobile,
            },
        );
        Ok(id)
    }

    pub fn identify(&self, face_tag: &FaceTag) -> Identification {
        match self.by_tag(face_tag) {
            Some(person) => Identification::Known {
                person: person.clone(),
            },
            None => Identification::Unknown,
        }
    }

    pub fn get(&self, id: PersonId) -> Option<&Person> {
        self.people.get(&id)
    }

    /// All people ordered by id.
    pub fn list_people(&self) -> Vec<Person> {
        self.people.values().cloned().collect()
    }

    pub fn remove_person(&mut self, id: PersonId) -> Result<Person, RegistryError> {
        self.people.remove(&id).ok_or(RegistryError::NotFound(id))
    }

    pub fn len(&self) -> usize {
        self.people.len()
    }

    pub fn is_empty(&self) -> bool {
        self.people.is_empty()
    }

    fn by_tag(&self, tag: &FaceTag) -> Option<&Person> {
        self.people.values().find(|p| &p.face_tag == tag)
    }
}
