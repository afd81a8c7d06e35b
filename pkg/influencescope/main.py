import json
import logging
import os
import sys

from influencescope.core.auxiliaries.stream_builder import generate_stream
from influencescope.core.auxiliaries.utils import (get_rng, setup_seed,
                                                   update_logger)
from influencescope.core.cmd_args import args_to_opts, parse_args
from influencescope.core.configs.config import global_cfg
from influencescope.core.errors import (InfluenceScopeError,
                                        InvariantViolation)
from influencescope.core.graph import load_snapshot
from influencescope.core.oracle import (exact_influence,
                                        exhaustive_optimal_seed,
                                        make_budget, mc_influence)
from influencescope.core.runner import (read_seeds, run_bench, run_eval,
                                        run_im, run_topk)

logger = logging.getLogger('influencescope')

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INVARIANT = 3


def _emit(result, out=None):
    text = json.dumps(result, sort_keys=True)
    if out:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
    print(text)


def cmd_gen_stream(args, cfg):
    base, events = generate_stream(cfg.stream.full_graph,
                                   cfg.stream.fractions,
                                   get_rng(cfg.seed),
                                   base_out=cfg.stream.base_out,
                                   stream_out=cfg.stream.stream_out)
    _emit({
        'base': cfg.stream.base_out,
        'stream': cfg.stream.stream_out,
        'base_edges': base.m,
        'updates': len(events),
    }, args.out)


def cmd_track_topk(args, cfg):
    run_topk(args.graph, args.stream, cfg).save()


def cmd_track_im(args, cfg):
    run_im(args.graph, args.stream, cfg).save()


def cmd_oracle(args, cfg):
    g = load_snapshot(args.graph)
    budget = make_budget(cfg.oracle.max_configs, cfg.oracle.mc_iterations)
    if args.task == 'exact':
        result = {'seeds': args.seeds,
                  'influence': exact_influence(g, args.seeds, budget)}
    elif args.task == 'mc':
        mean, std_err = mc_influence(g, args.seeds, budget, get_rng(cfg.seed))
        result = {'seeds': args.seeds, 'influence': mean, 'std_err': std_err}
    else:
        seeds, value = exhaustive_optimal_seed(g, args.k, budget)
        result = {'k': args.k, 'seeds': list(seeds), 'influence': value}
    _emit(result, args.out)


def cmd_eval(args, cfg):
    if os.path.isfile(args.seeds):
        seeds = read_seeds(args.seeds)
    else:
        seeds = [int(x) for x in args.seeds.split(',') if x != '']
    _emit(run_eval(args.graph, seeds, cfg), args.out)


def cmd_bench(args, cfg):
    _emit(run_bench(cfg, graph=args.graph, stream=args.stream), args.out)


COMMANDS = {
    'gen-stream': cmd_gen_stream,
    'track-topk': cmd_track_topk,
    'track-im': cmd_track_im,
    'oracle': cmd_oracle,
    'eval': cmd_eval,
    'bench': cmd_bench,
}


def main(argv=None):
    try:
        args = parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE

    try:
        init_cfg = global_cfg.clone()
        if args.cfg_file:
            init_cfg.merge_from_file(args.cfg_file)
        init_cfg.merge_from_list(args_to_opts(args) + (args.opts or []))
    except (ValueError, KeyError, AssertionError) as err:
        logger.error(f'Invalid configuration: {err}')
        return EXIT_USAGE
    except OSError as err:
        logger.error(f'Cannot read the config: {err}')
        return EXIT_DATA

    update_logger(init_cfg)
    setup_seed(init_cfg.seed)
    init_cfg.freeze()

    try:
        COMMANDS[args.command](args, init_cfg)
    except InvariantViolation as err:
        logger.error(f'Invariant violated: {err}')
        return EXIT_INVARIANT
    except (InfluenceScopeError, OSError) as err:
        logger.error(f'{type(err).__name__}: {err}')
        return EXIT_DATA
    except (ValueError, AssertionError) as err:
        logger.error(f'Invalid arguments: {err}')
        return EXIT_USAGE
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
