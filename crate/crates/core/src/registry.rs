//! Name-keyed collections of interchangeable strategies.
//!
//! Factorization methods, Smarandache evaluators and census kernels all live
//! behind a trait; a [`Registry`] maps the names used on the command line to
//! boxed implementations.

use crate::error::{Error, Result};

pub trait Named {
    fn name(&self) -> &'static str;
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, entries: Vec::new() }
    }

    /// Adds `entry`, replacing any previous entry with the same name.
    pub fn register(&mut self, entry: Box<T>) -> &mut Self {
        let name = entry.name();
        self.entries.retain(|e| e.name() != name);
        self.entries.push(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }
    struct Hello(&'static str);
    impl Named for Hello {
        fn name(&self) -> &'static str {
            self.0
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            format!("hello from {}", self.0)
        }
    }

    #[test]
    fn lookup_and_replace() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        reg.register(Box::new(Hello("a"))).register(Box::new(Hello("b")));
        assert_eq!(reg.get("b").unwrap().greet(), "hello from b");
        reg.register(Box::new(Hello("a")));
        assert_eq!(reg.names(), vec!["b", "a"]);
        match reg.get("zzz") {
            Err(Error::UnknownStrategy { available, .. }) => assert_eq!(available, "b, a"),
            other => panic!("unexpected {:?}", other.map(|g| g.greet())),
        }
    }
}
