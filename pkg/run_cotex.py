import argparse
import logging
import sys

from config.config import Config
from src.engine.audit import BFDN_CHECKS, CONSERVATION, EDGE_EVENTS, REANCHORS, audit_trace
from src.engine.base import bfdn_bound
from src.game import create_adversary, game_bound, generalized_init, play, player_balancing
from src.game.models import GameState
from src.utils.file_utils import load_trace, read_graph, read_tree, save_rows_to_csv, write_graph, write_trace, write_tree
from src.utils.utils import CotexError, init_logging
from src.workbench import (GENERATORS, RUNNABLE, bound_table, create_tree, gen_grid_with_obstacles,
                           load_experiment, parse_grid, parse_obstacle, run_algorithm, sweep)

init_logging()
logger = logging.getLogger(__name__)

MODELS = {"planner": "planner", "breakdown": "breakdown", "graph": "graph_bfdn"}


def _add_world_args(parser):
    parser.add_argument('--generator', type=str, choices=sorted(GENERATORS), default='random',
                        help="Tree generator used when no --tree or --grid is given.")
    parser.add_argument('--n', type=int, default=100, help="Node count (random, path).")
    parser.add_argument('--legs', type=int, default=4, help="Spider legs.")
    parser.add_argument('--depth-param', dest='depth_param', type=int, default=4,
                        help="Depth D of spider and complete trees.")
    parser.add_argument('--b', type=int, default=2, help="Branching factor of complete trees.")
    parser.add_argument('--leaves', type=int, default=8, help="Star leaves.")
    parser.add_argument('--seed', type=int, default=0, help="Seed for random trees, grids and masks.")
    parser.add_argument('--tree', type=str, help="Read the tree from a file instead of generating it.")
    parser.add_argument('--graph', type=str, help="Read a graph (with distance oracle) from a file.")
    parser.add_argument('--grid', type=str, help="Grid graph WxH.")
    parser.add_argument('--obstacle', type=str, action='append', default=[],
                        help="Obstacle rectangle x1,y1,x2,y2 (repeatable).")
    parser.add_argument('--random-obstacles', dest='random_obstacles', type=int, default=0,
                        help="Extra random obstacle rectangles drawn from the seed.")


def _world(args):
    if args.tree:
        return read_tree(args.tree)
    if args.graph:
        return read_graph(args.graph)
    if args.grid:
        width, height = parse_grid(args.grid)
        return gen_grid_with_obstacles(width, height, [parse_obstacle(o) for o in args.obstacle],
                                       seed=args.seed, random_obstacles=args.random_obstacles)
    params = {
        "random": dict(n=args.n, seed=args.seed),
        "spider": dict(k=args.legs, D=args.depth_param),
        "complete": dict(b=args.b, D=args.depth_param),
        "star": dict(leaves=args.leaves),
        "path": dict(n=args.n),
    }[args.generator]
    return create_tree(args.generator, **params)


def cmd_gen(args) -> int:
    world = _world(args)
    if world.is_tree:
        write_tree(world, args.out)
    else:
        write_graph(world, args.out, with_dist=True)
    print(f"{world!r} -> {args.out}")
    return 0


def cmd_run(args) -> int:
    world = _world(args)
    name = MODELS[args.model] if args.model else args.algo
    outcome = run_algorithm(world, name, args.k, ell=args.ell, depth=args.depth, mask=args.mask, seed=args.seed)
    if args.trace and outcome.trace is not None:
        write_trace(outcome.trace, args.trace)
    print(outcome.summary.model_dump_json(indent=2))
    for v in outcome.report.violations:
        logger.error("[%s] round %s: %s", v.check, v.round, v.detail)
    outcome.report.raise_for_violations()
    return 0


def cmd_game(args) -> int:
    if args.init == 'standard':
        init = GameState.standard(args.k, args.delta)
    else:
        kind, _, u = args.init.partition(':')
        if kind != 'generalized' or not u:
            raise ValueError(f"Unknown init: {args.init}")
        init = generalized_init(args.k, int(u), args.delta)
    adversary = create_adversary(args.adversary, seed=Config.seed_or(args.seed))
    length, steps = play(player_balancing, adversary, init)
    bound = game_bound(args.k, args.delta)
    print(f"length={length} bound={bound:.3f} ok={length <= bound}")
    if args.steps:
        save_rows_to_csv([s.model_dump() for s in steps], args.steps, ["t", "a", "b", "loads", "untouched"])
    return 0 if length <= bound else 2


def cmd_sweep(args) -> int:
    spec = load_experiment(args.experiment)
    df, ok = sweep(spec, output=args.output, workers=args.workers, progress=not args.quiet)
    print(df.to_string(index=False))
    return 0 if ok else 2


def cmd_bounds(args) -> int:
    table = bound_table(args.n, args.D, args.k, args.delta, ells=args.ells)
    print(table.to_string(index=False))
    return 0


def cmd_verify(args) -> int:
    trace = load_trace(args.trace)
    world = read_tree(args.world) if trace.is_tree else read_graph(args.world)
    if trace.algorithm == "bfdn":
        checks, bound = BFDN_CHECKS + (REANCHORS,), bfdn_bound(world, trace.k)
    elif trace.algorithm in ("planner", "graph_bfdn"):
        checks, bound = (CONSERVATION, EDGE_EVENTS), bfdn_bound(world, trace.k)
    else:
        checks, bound = (CONSERVATION, EDGE_EVENTS), None
    report = audit_trace(trace, world, trace.k, checks=checks, bound=bound)
    print(report.model_dump_json(indent=2))
    report.raise_for_violations()
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Collaborative tree exploration simulator")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('gen', help="Write a generated tree or grid graph to a file.")
    _add_world_args(p)
    p.add_argument('--out', type=str, required=True, help="Destination file.")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser('run', help="Run one simulation and print its summary.")
    _add_world_args(p)
    p.add_argument('--algo', type=str, choices=RUNNABLE, default='bfdn', help="Exploration algorithm.")
    p.add_argument('--model', type=str, choices=sorted(MODELS),
                   help="Extension model; overrides --algo with the matching runner.")
    p.add_argument('--k', type=int, default=4, help="Number of robots.")
    p.add_argument('--ell', type=int, default=2, help="Recursion depth of bfdn_ell.")
    p.add_argument('--depth', type=int, help="Depth budget of bfdn1 (defaults to the tree depth).")
    p.add_argument('--mask', type=str, default='ones',
                   help="Mobility mask: ones | bernoulli:p | roundrobin | file:path | heaviest.")
    p.add_argument('--trace', type=str, help="Write the JSONL trace here.")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser('game', help="Play the urns game against an adversary.")
    p.add_argument('--k', type=int, default=8, help="Number of urns.")
    p.add_argument('--delta', type=int, default=2, help="Balls per urn that end the game.")
    p.add_argument('--player', type=str, choices=['balancing'], default='balancing', help="Player strategy.")
    p.add_argument('--adversary', type=str, choices=['greedy', 'random', 'optimal'], default='greedy',
                   help="Adversary strategy.")
    p.add_argument('--init', type=str, default='standard', help="standard | generalized:u")
    p.add_argument('--seed', type=int, default=0, help="Seed of the random adversary.")
    p.add_argument('--steps', type=str, help="Write the per-step CSV here.")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser('sweep', help="Run an experiment matrix from a JSON file into a CSV.")
    p.add_argument('experiment', type=str, help="Experiment JSON file.")
    p.add_argument('--output', type=str, help="CSV destination (defaults to the experiment's).")
    p.add_argument('--workers', type=int, help="Process pool width.")
    p.add_argument('--quiet', action='store_true', help="No progress bar.")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('bounds', help="Print the closed-form bound table.")
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--D', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--delta', type=int, required=True)
    p.add_argument('--ells', type=int, nargs='+', default=[1, 2, 3], help="Values of ell to tabulate.")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser('verify', help="Re-audit a saved trace against its tree or graph file.")
    p.add_argument('--trace', type=str, required=True, help="JSONL trace.")
    p.add_argument('--world', type=str, required=True, help="Tree or graph file the trace ran on.")
    p.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CotexError as e:
        logger.error("%s failed: %s", args.command, e)
        return 1


if __name__ == '__main__':
    sys.exit(main())
