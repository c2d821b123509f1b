// SPDX-License-Identifier: Apache-2.0

//! Compiles a program and a tape into the starting battlefield.

use thiserror::Error;

use crate::engine::token_permanent;
use crate::model::{
    AttachTarget, BehaviorTag, Card, CardTypes, Colors, CreatureType, GameState, MarkerSide,
    Permanent, Phase, Player, ReanimateRule, TokenSpec,
};
use crate::utm::{Program, ResultColor, ResultType, RuleCardSpec, TmState, TmTape};

/// +1/+1 counters given to 2/2 infrastructure creatures at setup. They must
/// outlast Dread of Night (-2), Infest (-2) and, for program cards, the -1
/// a rule set takes in the cycle it phases out of play for good.
pub const SETUP_COUNTERS: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoardRecipe {
    pub program: Program,
    pub tape: TmTape,
    pub start_state: TmState,
    pub head_token_color: Colors,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("start state must be q1 or q2, got {0}")]
    HaltedStart(TmState),
    #[error("head token colour must be a single colour, got {0}")]
    HeadColor(Colors),
}

impl BoardRecipe {
    /// A recipe with the default green head token. The tape is normalized.
    pub fn new(program: Program, tape: TmTape, start_state: TmState) -> Result<Self, CompileError> {
        if !start_state.is_running() {
            return Err(CompileError::HaltedStart(start_state));
        }
        Ok(BoardRecipe {
            program,
            tape: tape.normalized(),
            start_state,
            head_token_color: Colors::GREEN,
        })
    }

    pub fn with_head_color(mut self, color: Colors) -> Result<Self, CompileError> {
        if color.bits().count_ones() != 1 {
            return Err(CompileError::HeadColor(color));
        }
        self.head_token_color = color;
        Ok(self)
    }
}

fn token_spec(rule: &RuleCardSpec) -> TokenSpec {
    let (creature_type, colors) = match (rule.result_type, rule.result_color) {
        (ResultType::Assassin, _) => (CreatureType::Assassin, Colors::BLUE),
        (ResultType::Symbol(s), ResultColor::White) => (CreatureType::Symbol(s), Colors::WHITE),
        (ResultType::Symbol(s), ResultColor::Green) => (CreatureType::Symbol(s), Colors::GREEN),
        (ResultType::Symbol(s), ResultColor::Blue) => (CreatureType::Symbol(s), Colors::BLUE),
    };
    TokenSpec {
        creature_type,
        colors,
        tapped: rule.result_tapped,
        power: 2,
        toughness: 2,
    }
}

/// A laced, reinforced creature. Alice's also become Assembly-Workers so
/// Steely Resolve gives them shroud.
fn infrastructure_creature(
    name: &'static str,
    controller: Player,
    stats: (i32, i32),
    types: &[CreatureType],
    counters: u32,
) -> Permanent {
    let mut p = Permanent::new(name, controller, CardTypes::CREATURE);
    p.base_power = stats.0;
    p.base_toughness = stats.1;
    p.colors = Colors::LACED;
    p.creature_types = types.to_vec();
    if controller == Player::Alice {
        p.creature_types.push(CreatureType::AssemblyWorker);
    }
    p.plus_counters = counters;
    p
}

fn rotlung(controller: Player, rule: ReanimateRule) -> Permanent {
    let mut p = infrastructure_creature(
        "Rotlung Reanimator",
        controller,
        (2, 2),
        &[CreatureType::Zombie, CreatureType::Cleric],
        SETUP_COUNTERS,
    );
    p.behaviors.push(BehaviorTag::RotlungTrigger(rule));
    p
}

fn xathrid(controller: Player, rule: ReanimateRule) -> Permanent {
    let mut p = infrastructure_creature(
        "Xathrid Necromancer",
        controller,
        (2, 2),
        &[CreatureType::Human, CreatureType::Wizard],
        SETUP_COUNTERS,
    );
    p.behaviors.push(BehaviorTag::XathridTrigger(rule));
    p
}

fn enchantment(name: &'static str, controller: Player, tag: BehaviorTag) -> Permanent {
    let mut p = Permanent::new(name, controller, CardTypes::ENCHANTMENT);
    p.behaviors.push(tag);
    p
}

/// One program card per rule, each paired with its Cloak of Invisibility.
/// Cards outside `start_state` begin phased out. Cloaks are returned with
/// `attached_to` unset; [`build_initial_state`] wires them once ids exist.
pub fn instantiate_program_cards(program: &Program, start_state: TmState) -> Vec<(Permanent, Permanent)> {
    program
        .rules()
        .iter()
        .map(|rule| {
            let reanimate = ReanimateRule {
                watches: CreatureType::Symbol(rule.trigger_type),
                token: token_spec(rule),
                program_state: Some(rule.state),
            };
            let mut card = if rule.result_tapped {
                xathrid(Player::Bob, reanimate)
            } else {
                rotlung(Player::Bob, reanimate)
            };
            card.has_phasing = true;
            card.phased_out = rule.state != start_state;
            let mut cloak = enchantment("Cloak of Invisibility", Player::Alice, BehaviorTag::CloakOfInvisibility);
            cloak.phased_out = card.phased_out;
            (card, cloak)
        })
        .collect()
}

fn marker_token(side: MarkerSide) -> TokenSpec {
    let (creature_type, colors) = match side {
        MarkerSide::Left => (CreatureType::Lhurgoyf, Colors::GREEN),
        MarkerSide::Right => (CreatureType::Rat, Colors::WHITE),
    };
    TokenSpec {
        creature_type,
        colors,
        tapped: false,
        power: 2,
        toughness: 2,
    }
}

/// Everything on the battlefield that is neither a program card, a Cloak nor
/// part of the tape, in a fixed order. Illusory Gains comes last.
pub fn infrastructure() -> Vec<Permanent> {
    let mut out = Vec::new();
    out.push(enchantment("Wheel of Sun and Moon", Player::Alice, BehaviorTag::WheelOfSunAndMoon));
    out.last_mut().expect("just pushed").attached_to = Some(AttachTarget::Player(Player::Alice));
    out.push(enchantment(
        "Steely Resolve",
        Player::Alice,
        BehaviorTag::SteelyResolve(CreatureType::AssemblyWorker),
    ));
    for _ in 0..2 {
        out.push(enchantment("Dread of Night", Player::Alice, BehaviorTag::DreadOfNight(Colors::BLACK)));
    }
    let mut fungus = infrastructure_creature(
        "Fungus Sliver",
        Player::Alice,
        (2, 2),
        &[CreatureType::Fungus, CreatureType::Incarnation],
        SETUP_COUNTERS,
    );
    fungus
        .behaviors
        .push(BehaviorTag::FungusSliverGrant(CreatureType::Incarnation));
    out.push(fungus);

    let cephalid = TokenSpec {
        creature_type: CreatureType::Symbol(crate::utm::TmSymbol::BLANK),
        colors: Colors::BLACK,
        tapped: false,
        power: 2,
        toughness: 2,
    };
    for (side, watches) in [(MarkerSide::Left, CreatureType::Lhurgoyf), (MarkerSide::Right, CreatureType::Rat)] {
        out.push(rotlung(
            Player::Alice,
            ReanimateRule {
                watches,
                token: cephalid,
                program_state: None,
            },
        ));
        out.push(rotlung(
            Player::Bob,
            ReanimateRule {
                watches,
                token: marker_token(side),
                program_state: None,
            },
        ));
        out.push(enchantment("Shared Triumph", Player::Alice, BehaviorTag::SharedTriumph(watches)));
    }

    out.push(enchantment("Wild Evocation", Player::Bob, BehaviorTag::WildEvocation));
    out.push(enchantment("Recycle", Player::Bob, BehaviorTag::Recycle));
    out.push(enchantment("Privileged Position", Player::Bob, BehaviorTag::PrivilegedPosition));
    for controller in [Player::Alice, Player::Bob] {
        let mut vigor = infrastructure_creature(
            "Vigor",
            controller,
            (6, 6),
            &[CreatureType::Elemental, CreatureType::Incarnation],
            0,
        );
        vigor.behaviors.push(BehaviorTag::Vigor);
        out.push(vigor);
    }
    let mut orb = Permanent::new("Mesmeric Orb", Player::Alice, CardTypes::ARTIFACT);
    orb.behaviors.push(BehaviorTag::MesmericOrb);
    out.push(orb);
    let mut tomb = Permanent::new("Ancient Tomb", Player::Alice, CardTypes::LAND);
    tomb.tapped = true;
    out.push(tomb);
    out.push(enchantment("Prismatic Omen", Player::Alice, BehaviorTag::PrismaticOmen));
    out.push(enchantment("Choke", Player::Alice, BehaviorTag::Choke));
    for controller in [Player::Alice, Player::Bob] {
        let mut archon = infrastructure_creature("Blazing Archon", controller, (5, 6), &[CreatureType::Archon], 0);
        archon.behaviors.push(BehaviorTag::BlazingArchon);
        out.push(archon);
    }
    out.push(enchantment("Illusory Gains", Player::Alice, BehaviorTag::IllusoryGains));
    out
}

/// Tape tokens, ordered outermost-left to outermost-right, end markers
/// included. All are Bob's 2/2 tokens; distance from the head is carried
/// in +1/+1 counters (Shared Triumph supplies the markers' last point).
pub fn encode_tape_tokens(tape: &TmTape, head_color: Colors) -> Vec<Permanent> {
    let cell = |symbol, colors, distance: usize| {
        let mut p = token_permanent(
            TokenSpec {
                creature_type: CreatureType::Symbol(symbol),
                colors,
                tapped: false,
                power: 2,
                toughness: 2,
            },
            Player::Bob,
        );
        p.plus_counters = distance as u32;
        p
    };
    let marker = |side, distance: usize| {
        let mut p = token_permanent(marker_token(side), Player::Bob);
        p.plus_counters = distance as u32 - 1;
        p
    };
    let mut out = vec![marker(MarkerSide::Left, tape.left.len() + 1)];
    for (i, s) in tape.left.iter().enumerate().rev() {
        out.push(cell(*s, Colors::GREEN, i + 1));
    }
    out.push(cell(tape.head, head_color, 0));
    for (i, s) in tape.right.iter().enumerate() {
        out.push(cell(*s, Colors::WHITE, i + 1));
    }
    out.push(marker(MarkerSide::Right, tape.right.len() + 1));
    out
}

/// The full starting game: Alice to act at a step boundary holding Infest.
pub fn build_initial_state(recipe: &BoardRecipe) -> GameState {
    let mut state = GameState::new();
    for (card, mut cloak) in instantiate_program_cards(&recipe.program, recipe.start_state) {
        let host = state.add_permanent(card);
        cloak.attached_to = Some(AttachTarget::Permanent(host));
        state.add_permanent(cloak);
    }
    let mut gains = None;
    for p in infrastructure() {
        let is_gains = p.behaviors.contains(&BehaviorTag::IllusoryGains);
        let id = state.add_permanent(p);
        if is_gains {
            gains = Some(id);
        }
    }
    let tape = recipe.tape.clone().normalized();
    let tokens = encode_tape_tokens(&tape, recipe.head_token_color);
    // Illusory Gains sits on the cell the head has just left: the nearest
    // right cell, or the Rat when the right side is empty.
    let host_index = tape.left.len() + 2;
    let mut host = None;
    for (i, mut p) in tokens.into_iter().enumerate() {
        if i == host_index {
            p.controller = Player::Alice;
        }
        let id = state.add_permanent(p);
        if i == host_index {
            host = Some(id);
        }
    }
    let gains = gains.expect("infrastructure includes Illusory Gains");
    state.get_mut(gains).expect("added").attached_to = host.map(AttachTarget::Permanent);

    let alice = state.player_mut(Player::Alice);
    alice.hand = vec![Card::Infest];
    alice.library = [Card::CleansingBeam, Card::CoalitionVictory, Card::SoulSnuffers].into();
    state.active_player = Player::Alice;
    state.phase = Phase::Untap;
    state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::census;
    use crate::utm::TmSymbol;

    fn sym(name: &str) -> TmSymbol {
        TmSymbol::from_type_name(name).unwrap()
    }

    fn recipe(left: &[&str], head: &str, right: &[&str], state: TmState) -> BoardRecipe {
        let tape = TmTape::new(
            left.iter().map(|s| sym(s)),
            sym(head),
            right.iter().map(|s| sym(s)),
        );
        BoardRecipe::new(Program::canonical(), tape, state).unwrap()
    }

    #[test]
    fn program_cards_split_rotlung_and_xathrid() {
        let cards = instantiate_program_cards(&Program::canonical(), TmState::Q1);
        let xathrids = cards.iter().filter(|(c, _)| c.name == "Xathrid Necromancer").count();
        assert_eq!(cards.len(), 36);
        assert_eq!(xathrids, 7);
        assert!(cards.iter().all(|(c, _)| c.has_phasing));
        for (card, cloak) in &cards {
            let state = card.behaviors[0].reanimate_rule().unwrap().0.program_state.unwrap();
            assert_eq!(card.phased_out, state != TmState::Q1);
            assert_eq!(cloak.phased_out, card.phased_out);
        }
    }

    #[test]
    fn marker_reanimators_do_not_phase() {
        let infra = infrastructure();
        let markers: Vec<_> = infra.iter().filter(|p| p.name == "Rotlung Reanimator").collect();
        assert_eq!(markers.len(), 4);
        assert!(markers.iter().all(|p| !p.has_phasing));
    }

    #[test]
    fn encodes_left_cell_and_markers() {
        let r = recipe(&["Elf"], "Aetherborn", &[], TmState::Q1);
        let state = build_initial_state(&r);
        let stats = |pred: &dyn Fn(&Permanent) -> bool| {
            let p = state.battlefield.values().find(|p| pred(p)).unwrap();
            (state.effective_stats(p.id).unwrap(), p.colors)
        };
        assert_eq!(stats(&|p| p.tape_symbol() == Some(sym("Elf"))), ((3, 3), Colors::GREEN));
        assert_eq!(stats(&|p| p.tape_symbol() == Some(sym("Aetherborn"))), ((2, 2), Colors::GREEN));
        assert_eq!(stats(&|p| p.marker_side() == Some(MarkerSide::Left)).0, (4, 4));
        assert_eq!(stats(&|p| p.marker_side() == Some(MarkerSide::Right)).0, (3, 3));
    }

    #[test]
    fn long_right_side_counts_up() {
        let right: Vec<&str> = crate::utm::SYMBOL_TYPES.to_vec();
        let r = recipe(&[], "Cephalid", &right, TmState::Q2);
        let state = build_initial_state(&r);
        let mut whites: Vec<i32> = state
            .battlefield
            .values()
            .filter(|p| p.is_tape_token() && p.colors == Colors::WHITE)
            .map(|p| state.effective_stats(p.id).unwrap().1)
            .collect();
        whites.sort();
        assert_eq!(whites, (3..=20).collect::<Vec<_>>());
    }

    #[test]
    fn table_one_row_sums() {
        let state = build_initial_state(&recipe(&[], "Cephalid", &[], TmState::Q1));
        let nontoken = state.battlefield.values().filter(|p| !p.is_token).count();
        assert_eq!(nontoken, 95);
        let rows = census(&state);
        let count = |name: &str, who: Player| -> usize {
            rows.iter()
                .filter(|r| r.name == name && r.controller == who)
                .map(|r| r.count)
                .sum()
        };
        assert_eq!(count("Cloak of Invisibility", Player::Alice), 36);
        assert_eq!(count("Rotlung Reanimator", Player::Bob), 31);
        assert_eq!(count("Rotlung Reanimator", Player::Alice), 2);
        assert_eq!(count("Vigor", Player::Alice), 1);
        assert_eq!(count("Vigor", Player::Bob), 1);
    }

    #[test]
    fn alice_holds_infest() {
        let state = build_initial_state(&recipe(&[], "Cephalid", &[], TmState::Q1));
        assert_eq!(state.player(Player::Alice).hand, vec![Card::Infest]);
        assert_eq!(
            state.player(Player::Alice).library,
            [Card::CleansingBeam, Card::CoalitionVictory, Card::SoulSnuffers]
        );
        assert!(state.player(Player::Bob).hand.is_empty());
        assert!(state.player(Player::Bob).library.is_empty());
    }

    #[test]
    fn halted_start_rejected() {
        let err = BoardRecipe::new(Program::canonical(), TmTape::blank(), TmState::Halted);
        assert_eq!(err, Err(CompileError::HaltedStart(TmState::Halted)));
    }
}
