use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{EntityBinding, FuiDocument, Placement, Prop, Rect, Screen};
use crate::names::{Ident, Slug};

/// Designer edits. Coordinates are signed so out-of-range input is reported
/// rather than unrepresentable; sizes beyond the screen are accepted and
/// left for validation to flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    AddScreen {
        id: Slug,
        title: String,
        width: i64,
        height: i64,
    },
    RemoveScreen {
        screen: Slug,
    },
    PlaceComponent {
        screen: Slug,
        component_ref: Slug,
        x: i64,
        y: i64,
        w: i64,
        h: i64,
        label: String,
    },
    MoveComponent {
        screen: Slug,
        instance: Slug,
        x: i64,
        y: i64,
    },
    ResizeComponent {
        screen: Slug,
        instance: Slug,
        w: i64,
        h: i64,
    },
    SetLabel {
        screen: Slug,
        instance: Slug,
        label: String,
    },
    /// Replaces the value in place, or appends a new prop.
    SetProp {
        screen: Slug,
        instance: Slug,
        name: String,
        value: String,
    },
    RemoveComponent {
        screen: Slug,
        instance: Slug,
    },
    /// Replaces the binding for the same entity in place, or appends.
    SetBinding(EntityBinding),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EditError {
    #[error("unknown screen `{0}`")]
    UnknownScreen(Slug),
    #[error("unknown component instance `{instance}` on screen `{screen}`")]
    UnknownInstance { screen: Slug, instance: Slug },
    #[error("screen `{0}` already exists")]
    DuplicateScreen(Slug),
    #[error("{what} must be a non-negative integer, got {value}")]
    NegativeCoordinate { what: &'static str, value: i64 },
    #[error("{what} must be a positive integer, got {value}")]
    NonPositiveSize { what: &'static str, value: i64 },
    #[error("prop name must not be empty")]
    EmptyPropName,
}

/// The edited document plus what the edit produced or dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditOutcome {
    pub doc: FuiDocument,
    /// Instance id assigned by `PlaceComponent`.
    pub placed: Option<Slug>,
    /// Bindings removed along with their screen by `RemoveScreen`.
    pub dropped_bindings: Vec<Ident>,
}

fn coordinate(what: &'static str, value: i64) -> Result<u32, EditError> {
    u32::try_from(value).map_err(|_| EditError::NegativeCoordinate { what, value })
}

fn size(what: &'static str, value: i64) -> Result<u32, EditError> {
    match u32::try_from(value) {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(EditError::NonPositiveSize { what, value }),
    }
}

/// Smallest `<component_ref>-<n>`, n >= 1, not already used on the screen.
fn next_instance_id(screen: &Screen, component_ref: &Slug) -> Slug {
    (1u64..)
        .map(|n| format!("{component_ref}-{n}"))
        .find(|candidate| screen.placement(candidate).is_none())
        .and_then(|id| Slug::new(id).ok())
        .expect("a slug followed by -<digits> is a slug")
}

/// Applies `edit` to a copy of `doc`; the input is never modified.
pub fn apply_edit(doc: &FuiDocument, edit: &Edit) -> Result<EditOutcome, EditError> {
    let mut out = EditOutcome {
        doc: doc.clone(),
        placed: None,
        dropped_bindings: Vec::new(),
    };
    let next = &mut out.doc;
    match edit {
        Edit::AddScreen {
            id,
            title,
            width,
            height,
        } => {
            if next.screen(id).is_some() {
                return Err(EditError::DuplicateScreen(id.clone()));
            }
            let screen = Screen::new(id.clone(), title.clone(), size("width", *width)?, size("height", *height)?);
            next.screens.push(screen);
        }
        Edit::RemoveScreen { screen } => {
            let idx = screen_index(next, screen)?;
            next.screens.remove(idx);
            let (dropped, kept): (Vec<_>, Vec<_>) = core::mem::take(&mut next.bindings)
                .into_iter()
                .partition(|b| b.screen_id == *screen);
            next.bindings = kept;
            out.dropped_bindings = dropped.into_iter().map(|b| b.entity_name).collect();
        }
        Edit::PlaceComponent {
            screen,
            component_ref,
            x,
            y,
            w,
            h,
            label,
        } => {
            let rect = Rect::new(coordinate("x", *x)?, coordinate("y", *y)?, size("w", *w)?, size("h", *h)?);
            let idx = screen_index(next, screen)?;
            let target = &mut next.screens[idx];
            let instance_id = next_instance_id(target, component_ref);
            target
                .components
                .push(Placement::new(instance_id.clone(), component_ref.clone(), rect, label.clone()));
            out.placed = Some(instance_id);
        }
        Edit::MoveComponent { screen, instance, x, y } => {
            let (x, y) = (coordinate("x", *x)?, coordinate("y", *y)?);
            let p = placement_mut(next, screen, instance)?;
            p.x = x;
            p.y = y;
        }
        Edit::ResizeComponent { screen, instance, w, h } => {
            let (w, h) = (size("w", *w)?, size("h", *h)?);
            let p = placement_mut(next, screen, instance)?;
            p.w = w;
            p.h = h;
        }
        Edit::SetLabel { screen, instance, label } => {
            placement_mut(next, screen, instance)?.label = label.clone();
        }
        Edit::SetProp {
            screen,
            instance,
            name,
            value,
        } => {
            if name.is_empty() {
                return Err(EditError::EmptyPropName);
            }
            let p = placement_mut(next, screen, instance)?;
            match p.props.iter_mut().find(|prop| prop.name == *name) {
                Some(prop) => prop.value = value.clone(),
                None => p.props.push(Prop::new(name.clone(), value.clone())),
            }
        }
        Edit::RemoveComponent { screen, instance } => {
            let idx = screen_index(next, screen)?;
            let components = &mut next.screens[idx].components;
            let pos = components
                .iter()
                .position(|p| p.instance_id == *instance)
                .ok_or_else(|| EditError::UnknownInstance {
                    screen: screen.clone(),
                    instance: instance.clone(),
                })?;
            components.remove(pos);
        }
        Edit::SetBinding(binding) => {
            screen_index(next, &binding.screen_id)?;
            match next
                .bindings
                .iter_mut()
                .find(|b| b.entity_name == binding.entity_name)
            {
                Some(existing) => *existing = binding.clone(),
                None => next.bindings.push(binding.clone()),
            }
        }
    }
    Ok(out)
}

fn screen_index(doc: &FuiDocument, id: &Slug) -> Result<usize, EditError> {
    doc.screens
        .iter()
        .position(|s| s.id == *id)
        .ok_or_else(|| EditError::UnknownScreen(id.clone()))
}

fn placement_mut<'a>(
    doc: &'a mut FuiDocument,
    screen: &Slug,
    instance: &Slug,
) -> Result<&'a mut Placement, EditError> {
    let idx = screen_index(doc, screen)?;
    doc.screens[idx]
        .components
        .iter_mut()
        .find(|p| p.instance_id == *instance)
        .ok_or_else(|| EditError::UnknownInstance {
            screen: screen.clone(),
            instance: instance.clone(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn slug(s: &str) -> Slug {
        Slug::new(s).unwrap()
    }

    fn base() -> FuiDocument {
        let mut doc = FuiDocument::new(slug("p"));
        doc.screens.push(Screen::new(slug("main"), "Main", 800, 600));
        doc
    }

    fn place(doc: &FuiDocument, r: &str) -> EditOutcome {
        apply_edit(
            doc,
            &Edit::PlaceComponent {
                screen: slug("main"),
                component_ref: slug(r),
                x: 0,
                y: 0,
                w: 10,
                h: 10,
                label: "L".into(),
            },
        )
        .unwrap()
    }

    #[test]
    fn instance_ids_fill_smallest_gap() {
        let d0 = base();
        let d1 = place(&d0, "button");
        assert_eq!(d1.placed.as_ref().unwrap(), "button-1");
        let d2 = place(&d1.doc, "button");
        assert_eq!(d2.placed.as_ref().unwrap(), "button-2");
        assert!(d0.screens[0].components.is_empty(), "input untouched");

        let removed = apply_edit(
            &d2.doc,
            &Edit::RemoveComponent {
                screen: slug("main"),
                instance: slug("button-1"),
            },
        )
        .unwrap();
        assert_eq!(place(&removed.doc, "button").placed.unwrap(), "button-1");
        assert_eq!(place(&removed.doc, "label").placed.unwrap(), "label-1");
    }

    #[test]
    fn negative_move_is_rejected() {
        let d = place(&base(), "button").doc;
        let err = apply_edit(
            &d,
            &Edit::MoveComponent {
                screen: slug("main"),
                instance: slug("button-1"),
                x: -5,
                y: 0,
            },
        )
        .unwrap_err();
        assert_eq!(err, EditError::NegativeCoordinate { what: "x", value: -5 });
    }

    #[test]
    fn geometry_is_never_clamped() {
        let d = place(&base(), "button").doc;
        let moved = apply_edit(
            &d,
            &Edit::MoveComponent {
                screen: slug("main"),
                instance: slug("button-1"),
                x: 5000,
                y: 7,
            },
        )
        .unwrap();
        assert_eq!(moved.doc.screens[0].components[0].x, 5000);
    }

    #[test]
    fn unknown_targets() {
        let d = base();
        assert_eq!(
            apply_edit(&d, &Edit::RemoveScreen { screen: slug("nope") }).unwrap_err().to_string(),
            "unknown screen `nope`"
        );
        assert!(matches!(
            apply_edit(
                &d,
                &Edit::SetLabel {
                    screen: slug("main"),
                    instance: slug("x-1"),
                    label: "X".into()
                }
            ),
            Err(EditError::UnknownInstance { .. })
        ));
        assert!(matches!(
            apply_edit(
                &d,
                &Edit::AddScreen {
                    id: slug("main"),
                    title: "again".into(),
                    width: 1,
                    height: 1
                }
            ),
            Err(EditError::DuplicateScreen(_))
        ));
    }

    #[test]
    fn set_prop_replaces_in_place() {
        let d = place(&base(), "button").doc;
        let set = |doc: &FuiDocument, name: &str, value: &str| {
            apply_edit(
                doc,
                &Edit::SetProp {
                    screen: slug("main"),
                    instance: slug("button-1"),
                    name: name.into(),
                    value: value.into(),
                },
            )
            .unwrap()
            .doc
        };
        let d = set(&set(&set(&d, "a", "1"), "b", "2"), "a", "3");
        let props = &d.screens[0].components[0].props;
        assert_eq!(props, &[Prop::new("a", "3"), Prop::new("b", "2")]);
    }
}
