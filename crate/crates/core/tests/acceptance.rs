//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use notakto::board::{enumerate_canonical, Board, Move, Symmetry, CENTER};
use notakto::engine::{play_out, recommend, Advisor, EngineStrategy};
use notakto::monoid::{elements, parse_element, reduce, MonoidElement};
use notakto::oracle::{Oracle, Outcome};
use notakto::position::Position;
use notakto::quotient::{
    infer_value_table, outcome_via_quotient, position_value, verify_table, InferenceConfig,
    ValueTable,
};
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(s: &str) -> MonoidElement {
    parse_element(s).unwrap()
}

struct Ctx {
    oracle: Oracle,
    table: ValueTable,
}

fn monoid_structure(_: &Ctx) -> Check {
    let listed = [
        "1", "a", "b", "ab", "b^2", "ab^2", "c", "ac", "bc", "abc", "c^2", "ac^2", "bc^2", "abc^2",
        "d", "ad", "bd", "abd",
    ];
    let els = elements();
    ensure(els.len() == 18, format!("{} elements", els.len()))?;
    for s in listed {
        ensure(els.contains(&e(s)), format!("{s} missing"))?;
        ensure(e(s).to_string() == s, format!("{s} renders differently"))?;
    }
    let relations = [
        ((2, 0, 0, 0), (0, 0, 0, 0)),
        ((0, 3, 0, 0), (0, 1, 0, 0)),
        ((0, 2, 1, 0), (0, 0, 1, 0)),
        ((0, 0, 3, 0), (1, 0, 2, 0)),
        ((0, 2, 0, 1), (0, 0, 0, 1)),
        ((0, 0, 1, 1), (1, 0, 0, 1)),
        ((0, 0, 0, 2), (0, 0, 2, 0)),
    ];
    for (l, r) in relations {
        ensure(
            reduce(l.0, l.1, l.2, l.3) == reduce(r.0, r.1, r.2, r.3),
            format!("relation {l:?} = {r:?} fails"),
        )?;
    }
    let mut triples = 0;
    for &x in els {
        for &y in els {
            ensure(
                x.multiply(y) == y.multiply(x),
                format!("{x}*{y} not commutative"),
            )?;
            for &z in els {
                ensure(
                    x.multiply(y).multiply(z) == x.multiply(y.multiply(z)),
                    format!("({x}{y}){z} not associative"),
                )?;
                triples += 1;
            }
        }
    }
    let mut p: Vec<String> = els
        .iter()
        .filter(|x| x.is_p())
        .map(|x| x.to_string())
        .collect();
    p.sort();
    ensure(p == ["a", "b^2", "bc", "c^2"], format!("P-set {p:?}"))?;
    Ok(format!(
        "18 elements, 7 relations, {triples} triples, P = {{{}}}",
        p.join(", ")
    ))
}

fn worked_derivation(_: &Ctx) -> Check {
    let c = MonoidElement::C;
    let c3 = c.pow(3);
    ensure(c3 == e("ac^2"), format!("c^3 = {c3}"))?;
    let ac3 = c3.multiply(c);
    ensure(
        ac3 == e("a").multiply(e("a")).multiply(e("c^2")),
        "ac^3 != aac^2",
    )?;
    ensure(e("a").multiply(e("a")) == MonoidElement::ONE, "aa != 1")?;
    let c4 = reduce(0, 0, 4, 0);
    ensure(c4 == MonoidElement::C2 && ac3 == c4, format!("c^4 = {c4}"))?;
    Ok("c^4 = ac^2*c = ac^3 = aac^2 = c^2".into())
}

fn board_combinatorics(_: &Ctx) -> Check {
    let classes = enumerate_canonical();
    let mut fixed = 0u32;
    for t in Symmetry::ALL {
        fixed += (0..512u32)
            .filter(|&m| Board::from_mask(m).unwrap().transform(t).mask() as u32 == m)
            .count() as u32;
    }
    ensure(
        fixed == 512 + 8 + 32 + 8 + 256,
        format!("fixed-point total {fixed}"),
    )?;
    ensure(classes.len() == 102, format!("{} classes", classes.len()))?;
    ensure(
        fixed / 8 == 102 && fixed.is_multiple_of(8),
        "Burnside average",
    )?;
    Ok(format!(
        "{} classes, Burnside {fixed}/8 = {}",
        classes.len(),
        fixed / 8
    ))
}

fn single_board_strategy(ctx: &Ctx) -> Check {
    let o = &ctx.oracle;
    let empty = Position::empty_boards(1);
    ensure(o.outcome(&empty) == Outcome::N, "empty board not N")?;
    let w = o.winning_moves(&empty).unwrap();
    ensure(
        w == [Move::new(0, CENTER)],
        format!("winning openings {w:?}"),
    )?;
    for c in (0..9u8).filter(|&c| c != CENTER) {
        let p = empty.apply(Move::new(0, c)).unwrap();
        ensure(
            o.outcome(&p) == Outcome::N,
            format!("opening {c} does not lose"),
        )?;
    }
    let center = empty.apply(Move::new(0, CENTER)).unwrap();
    for r in (0..9u8).filter(|&c| c != CENTER) {
        let p = center.apply(Move::new(0, r)).unwrap();
        let w = o.winning_moves(&p).unwrap();
        let (rr, rc) = ((r / 3) as i32, (r % 3) as i32);
        let knights: Vec<u8> = (0..9u8)
            .filter(|&k| {
                let (kr, kc) = ((k / 3) as i32, (k % 3) as i32);
                let (dr, dc) = ((kr - rr).abs(), (kc - rc).abs());
                (dr, dc) == (1, 2) || (dr, dc) == (2, 1)
            })
            .collect();
        ensure(knights.len() == 2, "knight geometry")?;
        for k in knights {
            ensure(
                w.contains(&Move::new(0, k)),
                format!("after reply {r}, knight move {k} does not win"),
            )?;
        }
    }
    Ok("center unique winning opening; 8 non-center openings lose; knight replies win".into())
}

fn two_board_start(ctx: &Ctx) -> Check {
    let o = &ctx.oracle;
    let t = &ctx.table;
    let two = Position::empty_boards(2);
    ensure(o.outcome(&two) == Outcome::P, "oracle: two empty not P")?;
    ensure(
        outcome_via_quotient(&two, t) == Outcome::P,
        "quotient: two empty not P",
    )?;
    let p: Position = "....X..../.........".parse().unwrap();
    ensure(o.outcome(&p) == Outcome::N, "oracle: center+empty not N")?;
    ensure(
        outcome_via_quotient(&p, t) == Outcome::N,
        "quotient: center+empty not N",
    )?;
    let mirror = Move::new(1, CENTER);
    ensure(
        o.winning_moves(&p).unwrap().contains(&mirror),
        "oracle: mirror center does not win",
    )?;
    let after = p.apply(mirror).unwrap();
    ensure(
        outcome_via_quotient(&after, t) == Outcome::P,
        "quotient: mirror center does not win",
    )?;
    Ok(format!(
        "values {} -> {} -> {}",
        position_value(&two, t),
        position_value(&p, t),
        position_value(&after, t)
    ))
}

fn dictionary_soundness(ctx: &Ctx) -> Check {
    let t = &ctx.table;
    let empty = Board::EMPTY.canonical();
    let center = Board::from_cells([CENTER]).unwrap().canonical();
    ensure(
        t.get(empty) == MonoidElement::C,
        format!("empty -> {}", t.get(empty)),
    )?;
    ensure(
        t.get(center) == MonoidElement::C2,
        format!("center -> {}", t.get(center)),
    )?;
    for (c, v) in t.entries() {
        if c.is_dead() {
            ensure(v == MonoidElement::ONE, format!("dead class {c} -> {v}"))?;
        }
    }
    let start = Instant::now();
    let r3 = verify_table(t, &ctx.oracle, 3).map_err(|e| e.to_string())?;
    let t3 = start.elapsed();
    ensure(
        t3 < Duration::from_secs(120),
        format!("<=3 sweep took {t3:?}"),
    )?;
    let start = Instant::now();
    let r4 = verify_table(t, &ctx.oracle, 4).map_err(|e| e.to_string())?;
    let t4 = start.elapsed();
    ensure(
        t4 < Duration::from_secs(30 * 60),
        format!("<=4 sweep took {t4:?}"),
    )?;
    Ok(format!(
        "<=3: {} multisets, 0 mismatches ({t3:.2?}); <=4: {} multisets, 0 mismatches ({t4:.2?})",
        r3.checked, r4.checked
    ))
}

fn mimicry_fails(ctx: &Ctx) -> Check {
    let f = ctx
        .oracle
        .find_mimicry_failure()
        .ok_or("no mimicry failure found")?;
    let after = f.position.apply(f.mimic_move).unwrap();
    ensure(
        ctx.oracle.outcome(&after) == Outcome::N,
        "mimic move wins after all",
    )?;
    ensure(!f.winning_moves.is_empty(), "no winning move")?;
    Ok(format!(
        "{} then opponent {}: mimic {} loses, {} wins",
        f.before, f.opponent_move, f.mimic_move, f.winning_moves[0]
    ))
}

fn engine_never_blunders(ctx: &Ctx) -> Check {
    let mut checked = 0u64;
    let mut positions: Vec<Vec<u32>> = (0..512).map(|a| vec![a]).collect();
    for a in 0..512u32 {
        for b in a..512u32 {
            positions.push(vec![a, b]);
        }
    }
    for masks in positions {
        let p = Position::from_masks(&masks).unwrap();
        if p.is_terminal() || ctx.oracle.outcome(&p) != Outcome::N {
            continue;
        }
        let r = recommend(&p, &ctx.table);
        let m = r.mv.ok_or_else(|| format!("{p}: no move"))?;
        let next = p.apply(m).map_err(|e| format!("{p}: {e}"))?;
        ensure(
            ctx.oracle.outcome(&next) == Outcome::P,
            format!("{p}: {m} blunders"),
        )?;
        checked += 1;
    }
    Ok(format!("{checked} N-positions of <=2 boards, no blunders"))
}

fn k_empty_boards(ctx: &Ctx) -> Check {
    let advisor = Advisor::Quotient(&ctx.table);
    let mut summary = Vec::new();
    for k in 1..=6usize {
        let value = MonoidElement::C.pow(k as u32);
        ensure(value.is_p() == (k % 2 == 0), format!("c^{k} = {value}"))?;
        let start = Position::empty_boards(k);
        ensure(
            position_value(&start, &ctx.table) == value,
            format!("k={k} value"),
        )?;
        let mut a = EngineStrategy(advisor);
        let mut b = EngineStrategy(advisor);
        let game = play_out(&start, [&mut a, &mut b]).map_err(|e| e.to_string())?;
        let expected_winner = if value.is_p() { 1 } else { 0 };
        ensure(
            game.winner() == expected_winner,
            format!("k={k}: player {} won", game.winner()),
        )?;
        summary.push(format!("c^{k}={value}"));
    }
    Ok(summary.join(", "))
}

fn fault_injection(ctx: &Ctx) -> Check {
    let classes = enumerate_canonical();
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let trials = 25;
    for _ in 0..trials {
        let class = classes[rng.random_range(0..classes.len())];
        let current = ctx.table.get(class);
        let replacement = loop {
            let x = elements()[rng.random_range(0..elements().len())];
            if x != current {
                break x;
            }
        };
        let bad = ctx.table.with_entry(class, replacement);
        ensure(
            verify_table(&bad, &ctx.oracle, 3).is_err(),
            format!("{class}: {current} -> {replacement} undetected"),
        )?;
    }
    Ok(format!(
        "{trials}/{trials} random corruptions detected at <=3"
    ))
}

fn main() -> ExitCode {
    let setup = Instant::now();
    let oracle = Oracle::new();
    let table = match infer_value_table(&oracle, &InferenceConfig::default()) {
        Ok(t) => t,
        Err(e) => {
            println!("[FAIL] setup: inference failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("setup: inferred dictionary in {:.2?}", setup.elapsed());
    let ctx = Ctx { oracle, table };

    #[allow(clippy::type_complexity)]
    let criteria: [(&str, fn(&Ctx) -> Check, Duration); 10] = [
        ("monoid structure", monoid_structure, Duration::from_secs(1)),
        (
            "worked derivation c^4 = c^2",
            worked_derivation,
            Duration::from_secs(1),
        ),
        (
            "board combinatorics",
            board_combinatorics,
            Duration::from_secs(1),
        ),
        (
            "single-board strategy",
            single_board_strategy,
            Duration::from_secs(1),
        ),
        ("two-board start", two_board_start, Duration::from_secs(1)),
        (
            "dictionary soundness",
            dictionary_soundness,
            Duration::from_secs(32 * 60),
        ),
        ("mimicry fails", mimicry_fails, Duration::from_secs(10)),
        (
            "engine never blunders",
            engine_never_blunders,
            Duration::from_secs(60),
        ),
        ("k empty boards", k_empty_boards, Duration::from_secs(60)),
        ("fault injection", fault_injection, Duration::from_secs(120)),
    ];
    let mut failures = 0;
    for (n, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check(&ctx);
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= *budget {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(detail) => println!("[PASS] AC-{:02} {name} ({elapsed:.2?}): {detail}", n + 1),
            Err(why) => {
                failures += 1;
                println!("[FAIL] AC-{:02} {name} ({elapsed:.2?}): {why}", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
