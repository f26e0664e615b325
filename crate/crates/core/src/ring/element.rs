use std::fmt;

use super::{Elem, Ring};
use crate::error::{Error, Result};

/// An element bundled with its ring; binary operations check that both
/// operands live in the same ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    ring: Ring,
    value: Elem,
}

impl Element {
    pub fn new(ring: &Ring, value: Elem) -> Result<Element> {
        if !ring.is_canonical(&value) {
            return Err(Error::InvalidParameters(format!("value is not a canonical element of {ring}")));
        }
        Ok(Element { ring: ring.clone(), value })
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Element> {
        Ok(Element { ring: ring.clone(), value: ring.parse_elem(text)? })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    fn same(&self, other: &Element) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DescriptorMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        Ok(())
    }

    fn wrap(&self, value: Elem) -> Element {
        Element { ring: self.ring.clone(), value }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same(other)?;
        Ok(self.wrap(self.ring.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.same(other)?;
        Ok(self.wrap(self.ring.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same(other)?;
        Ok(self.wrap(self.ring.mul(&self.value, &other.value)))
    }

    pub fn neg(&self) -> Element {
        self.wrap(self.ring.neg(&self.value))
    }

    pub fn involute(&self) -> Element {
        self.wrap(self.ring.involute(&self.value))
    }

    pub fn try_invert(&self) -> Result<Element> {
        Ok(self.wrap(self.ring.try_invert(&self.value)?))
    }

    pub fn is_symmetric(&self) -> bool {
        self.ring.is_symmetric(&self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.value)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.value))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.ring.format(&self.value), self.ring)
    }
}
