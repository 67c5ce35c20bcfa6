//! The three walker-constructor agents and the script they share.
//!
//! Agents walk, mark and remember. Every agent holds the same [`Program`]; what
//! an agent does next depends only on its identity and its own percept
//! history. A blackboard collects what the agents have marked, pinned and
//! cast, and every movement is appended to the [`Trace`].

mod routes;
mod trace;

use std::collections::BTreeMap;

use num_traits::Signed;
use thiserror::Error;

use crate::arrangement::{build_arrangement_with_marks, Arrangement};
use crate::geometry::{
    extend_double, midpoint, segment_intersection, Circle, GeometryError, Point2, Segment,
    SegmentIntersection,
};
use crate::label::{self, Label};
use crate::rational::{int, Rational};

pub use routes::{plan_routes, routes_to_trace, RouteError, Trail};
pub use trace::{
    verify_trace, ActionKind, Trace, TraceEntry, TraceError, TraceParseError, TraversalCounts,
    Verdict,
};

pub type AgentId = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unit scale must be positive")]
    NonPositiveUnit,
    #[error("theta must be positive")]
    NonPositiveTheta,
    #[error("agent {agent} cannot {what}")]
    Script { agent: AgentId, what: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionConfig {
    /// Grid position of the anchor vertex `0`.
    pub anchor: Point2,
    /// Length of one grid unit.
    pub unit: Rational,
    /// Resolution carried by the compass.
    pub theta: Rational,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            anchor: Point2::origin(),
            unit: int(1),
            theta: int(1),
        }
    }
}

/// One step of the shared program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instruction {
    /// Label the current location.
    Mark(&'static str),
    /// Walk `units` grid units along the grid direction `(dx, dy)`.
    Walk { dx: i64, dy: i64, units: i64 },
    /// Pin elastic string `n` at the current location.
    Pin(usize),
    /// Scribe a compass circle of diameter 2 units centred here.
    Scribe,
    /// Walk along a pinned string to the midpoint between two marked points.
    WalkToMidpoint(&'static str, &'static str),
    /// Walk along a pinned string to a marked point.
    DrawTo(&'static str),
    /// Cast the ray from `origin` through `through`, walking from the current
    /// location (on `origin..through`) out to twice the distance.
    Cast {
        origin: &'static str,
        through: &'static str,
        save: Saved,
    },
    /// Walk to the common point of all cast rays.
    WalkToRayMeet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Saved {
    D4,
    D5,
    D6,
}

/// The agent function shared by all agents: percept history to next action.
#[derive(Debug, Clone)]
pub struct Program {
    steps: Vec<(AgentId, Instruction)>,
}

impl Program {
    pub fn walker() -> Self {
        use Instruction::*;
        let steps = vec![
            (1, Mark("0")),
            (
                1,
                Walk {
                    dx: 0,
                    dy: 1,
                    units: 5,
                },
            ),
            (
                2,
                Walk {
                    dx: 0,
                    dy: -1,
                    units: 5,
                },
            ),
            (
                2,
                Walk {
                    dx: -1,
                    dy: 0,
                    units: 5,
                },
            ),
            (
                3,
                Walk {
                    dx: 0,
                    dy: -1,
                    units: 5,
                },
            ),
            (
                3,
                Walk {
                    dx: 1,
                    dy: 0,
                    units: 5,
                },
            ),
            // remember
            (1, Mark("t")),
            (2, Mark("1")),
            (3, Mark("2")),
            // first string and the compass
            (1, Pin(0)),
            (2, Pin(0)),
            (3, Pin(0)),
            (2, Scribe),
            (3, Scribe),
            // ray through a
            (3, WalkToMidpoint("1", "2")),
            (3, Mark("a")),
            (
                3,
                Cast {
                    origin: "t",
                    through: "a",
                    save: Saved::D4,
                },
            ),
            (3, Mark("3")),
            // c and b along the string
            (1, WalkToMidpoint("t", "2")),
            (1, Mark("c")),
            (1, DrawTo("2")),
            (2, WalkToMidpoint("1", "t")),
            (2, Mark("b")),
            (2, DrawTo("t")),
            (2, DrawTo("1")),
            // rays through c and b
            (
                2,
                Cast {
                    origin: "1",
                    through: "c",
                    save: Saved::D5,
                },
            ),
            (2, Mark("5")),
            (
                1,
                Cast {
                    origin: "2",
                    through: "b",
                    save: Saved::D6,
                },
            ),
            (1, Mark("4")),
            // second string
            (3, Pin(1)),
            (1, Pin(1)),
            (2, Pin(1)),
            (1, DrawTo("5")),
            (2, DrawTo("3")),
            (3, DrawTo("4")),
            (1, WalkToRayMeet),
            (1, Mark("m")),
        ];
        Program { steps }
    }

    /// Next action for `agent` given everything it has perceived so far
    /// (one percept per completed action).
    pub fn decide(&self, agent: AgentId, history: &[Percept]) -> Option<Instruction> {
        self.steps
            .iter()
            .filter(|(id, _)| *id == agent)
            .nth(history.len())
            .map(|(_, ins)| *ins)
    }

    fn turn_order(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.steps.iter().map(|(id, _)| *id)
    }
}

/// What an agent perceives after acting: where it now stands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Percept {
    pub position: Point2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Memory {
    Location(Point2),
    Marked(Label, Point2),
    Distance(Saved, Rational),
}

#[derive(Debug, Clone)]
pub struct Agent {
    pub id: AgentId,
    pub position: Point2,
    percepts: Vec<Percept>,
    memory: Vec<Memory>,
}

impl Agent {
    fn new(id: AgentId, position: Point2) -> Self {
        Agent {
            id,
            position,
            percepts: Vec::new(),
            memory: Vec::new(),
        }
    }

    pub fn memory(&self) -> &[Memory] {
        &self.memory
    }

    fn remember(&mut self, m: Memory) {
        self.memory.push(m);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub origin: Label,
    pub through: Label,
    pub end: Label,
    pub segment: Segment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SavedDistances {
    /// Squared lengths of the three rays.
    pub d4: Rational,
    pub d5: Rational,
    pub d6: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub config: ConstructionConfig,
    pub labeled_points: BTreeMap<Label, Point2>,
    /// The two pinned strings as closed polygons, each a list of sides.
    pub strings: Vec<Vec<Segment>>,
    pub rays: Vec<Ray>,
    pub circles: Vec<Circle>,
    pub saved_distances: SavedDistances,
}

impl ConstructionResult {
    pub fn point(&self, l: &str) -> &Point2 {
        &self.labeled_points[l]
    }

    /// Every drawn string side and ray.
    pub fn segments(&self) -> Vec<Segment> {
        self.strings
            .iter()
            .flatten()
            .cloned()
            .chain(self.rays.iter().map(|r| r.segment.clone()))
            .collect()
    }

    /// Planar arrangement of the drawn figure, split at every labelled point.
    pub fn arrangement(&self) -> Result<Arrangement, GeometryError> {
        let marks: Vec<Point2> = self.labeled_points.values().cloned().collect();
        build_arrangement_with_marks(&self.segments(), &marks)
    }

    /// The mirror axis: the ray from `0` towards `3`.
    pub fn axis(&self) -> (Point2, Point2) {
        (self.point("0").clone(), self.point("3").clone())
    }
}

/// Canonical label map for a finished construction.
pub fn canonical_labels(result: &ConstructionResult) -> BTreeMap<Label, Point2> {
    result.labeled_points.clone()
}

/// Canonical label of a point numbered in the written construction steps.
pub fn canonical_of_text(text: &str) -> Option<Label> {
    label::from_text_alias(text)
}

struct Board {
    marks: BTreeMap<Label, Point2>,
    pins: Vec<Vec<Point2>>,
    rays: Vec<Ray>,
    circles: Vec<Circle>,
    saved: BTreeMap<u8, Rational>,
}

impl Board {
    fn mark(&self, l: &str, agent: AgentId) -> Result<Point2, ConstructionError> {
        self.marks
            .get(l)
            .cloned()
            .ok_or_else(|| ConstructionError::Script {
                agent,
                what: format!("find unmarked point {l}"),
            })
    }

    fn string_sides(&self) -> Vec<Segment> {
        self.pins
            .iter()
            .filter(|p| p.len() >= 3)
            .flat_map(|p| {
                (0..p.len()).filter_map(move |i| {
                    Segment::new(p[i].clone(), p[(i + 1) % p.len()].clone()).ok()
                })
            })
            .collect()
    }

    fn along_string(&self, from: &Point2, to: &Point2) -> bool {
        self.string_sides()
            .iter()
            .any(|s| s.contains(from) && s.contains(to))
    }
}

pub fn run_construction(
    config: &ConstructionConfig,
) -> Result<(ConstructionResult, Trace), ConstructionError> {
    if !config.unit.is_positive() {
        return Err(ConstructionError::NonPositiveUnit);
    }
    if !config.theta.is_positive() {
        return Err(ConstructionError::NonPositiveTheta);
    }
    let program = Program::walker();
    let mut agents: Vec<Agent> = (1..=3)
        .map(|id| Agent::new(id, config.anchor.clone()))
        .collect();
    let mut board = Board {
        marks: BTreeMap::new(),
        pins: vec![Vec::new(), Vec::new()],
        rays: Vec::new(),
        circles: Vec::new(),
        saved: BTreeMap::new(),
    };
    let mut trace = Trace::default();

    for id in program.turn_order() {
        let agent = &mut agents[usize::from(id - 1)];
        let ins = program
            .decide(id, &agent.percepts)
            .expect("turn order follows the program");
        let from = agent.position.clone();
        let (action, to) = execute(config, &mut board, agent, ins)?;
        trace.push(TraceEntry {
            agent: id,
            action,
            from,
            to: to.clone(),
        });
        agent.position = to.clone();
        agent.remember(Memory::Location(to.clone()));
        agent.percepts.push(Percept { position: to });
    }

    let sides = |pins: &[Point2]| -> Result<Vec<Segment>, GeometryError> {
        (0..pins.len())
            .map(|i| Segment::new(pins[i].clone(), pins[(i + 1) % pins.len()].clone()))
            .collect()
    };
    let strings = board
        .pins
        .iter()
        .map(|p| sides(p))
        .collect::<Result<Vec<_>, _>>()?;
    let saved = |k: u8| board.saved.get(&k).cloned().expect("all rays cast");
    let result = ConstructionResult {
        config: config.clone(),
        labeled_points: board.marks,
        strings,
        rays: board.rays,
        circles: board.circles,
        saved_distances: SavedDistances {
            d4: saved(4),
            d5: saved(5),
            d6: saved(6),
        },
    };
    Ok((result, trace))
}

fn execute(
    config: &ConstructionConfig,
    board: &mut Board,
    agent: &mut Agent,
    ins: Instruction,
) -> Result<(ActionKind, Point2), ConstructionError> {
    let id = agent.id;
    let here = agent.position.clone();
    let fail = |what: String| ConstructionError::Script { agent: id, what };
    match ins {
        Instruction::Mark(l) => {
            let l = Label::new(l);
            if board.marks.contains_key(&l) {
                return Err(fail(format!("re-mark {l}")));
            }
            board.marks.insert(l.clone(), here.clone());
            agent.remember(Memory::Marked(l, here.clone()));
            Ok((ActionKind::Mark, here))
        }
        Instruction::Walk { dx, dy, units } => {
            let step = Point2::ints(dx * units, dy * units).scale(&config.unit);
            Ok((ActionKind::Walk, here.add(&step)))
        }
        Instruction::Pin(n) => {
            board.pins[n].push(here.clone());
            Ok((ActionKind::Pin, here))
        }
        Instruction::Scribe => {
            let c = Circle::new(here.clone(), &config.unit * int(2), config.theta.clone())?;
            board.circles.push(c);
            Ok((ActionKind::Scribe, here))
        }
        Instruction::WalkToMidpoint(p, q) => {
            let side = Segment::new(board.mark(p, id)?, board.mark(q, id)?)?;
            let to = midpoint(&side);
            if !board.along_string(&here, &to) {
                return Err(fail(format!(
                    "walk along a string to the midpoint of {p}{q}"
                )));
            }
            Ok((ActionKind::Walk, to))
        }
        Instruction::DrawTo(l) => {
            let to = board.mark(l, id)?;
            if !board.along_string(&here, &to) {
                return Err(fail(format!("follow a string to {l}")));
            }
            Ok((ActionKind::Draw, to))
        }
        Instruction::Cast {
            origin,
            through,
            save,
        } => {
            let o = board.mark(origin, id)?;
            let t = board.mark(through, id)?;
            let end = extend_double(&o, &t)?;
            let sight = Segment::new(o.clone(), t.clone())?;
            if !sight.contains(&here) {
                return Err(fail(format!("cast {origin}{through} from off the ray")));
            }
            let d2 = o.dist2(&end);
            let (slot, end_label) = match save {
                Saved::D4 => (4, "3"),
                Saved::D5 => (5, "5"),
                Saved::D6 => (6, "4"),
            };
            board.saved.insert(slot, d2.clone());
            agent.remember(Memory::Distance(save, d2));
            board.rays.push(Ray {
                origin: Label::new(origin),
                through: Label::new(through),
                end: Label::new(end_label),
                segment: Segment::new(o, end.clone())?,
            });
            Ok((ActionKind::Cast, end))
        }
        Instruction::WalkToRayMeet => {
            let [r0, r1, rest @ ..] = board.rays.as_slice() else {
                return Err(fail("find the ray meet before two rays exist".into()));
            };
            let SegmentIntersection::Point(meet) = segment_intersection(&r0.segment, &r1.segment)
            else {
                return Err(fail("find a single ray meet".into()));
            };
            if !rest.iter().all(|r| r.segment.contains(&meet)) {
                return Err(fail("find a common meet of all rays".into()));
            }
            Ok((ActionKind::Walk, meet))
        }
    }
}
