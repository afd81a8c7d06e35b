import argparse
import sys

ORACLE_TASKS = ['exact', 'mc', 'opt-seed']


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with code 1."""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f'{self.prog}: error: {message}\n')


def _fractions(text):
    try:
        values = [float(x) for x in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'fractions must look like a,b,c, but got {text!r}')
    if len(values) != 3:
        raise argparse.ArgumentTypeError(
            f'fractions needs exactly 3 values, but got {text!r}')
    return values


def _seed_list(text):
    try:
        return [int(x) for x in text.split(',') if x != '']
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'seeds must look like 1,2,3, but got {text!r}')


def _add_common(parser):
    parser.add_argument('--cfg',
                        dest='cfg_file',
                        help='Config file path',
                        default='',
                        type=str)
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument('--model', choices=['LT', 'IC'], default=None)
    parser.add_argument('--out', type=str, default=None)
    parser.add_argument('opts',
                        help='See influencescope/core/configs for all options',
                        default=None,
                        nargs=argparse.REMAINDER)


def _add_sampling(parser):
    parser.add_argument('--eps', type=float, default=None)
    parser.add_argument('--delta', type=float, default=None)


def build_parser():
    parser = _ArgumentParser(
        prog='influencescope',
        description='Influence analytics on dynamic graphs with RR set sketches')
    subparsers = parser.add_subparsers(dest='command',
                                       parser_class=_ArgumentParser)

    gen = subparsers.add_parser('gen-stream',
                                help='split a full graph into a base graph and an update stream')
    gen.add_argument('--graph', required=True, help='full graph file')
    gen.add_argument('--fractions', type=_fractions, default=None,
                     help='kept,churned,inserted edge fractions')
    gen.add_argument('--base-out', dest='base_out', default=None)
    gen.add_argument('--stream-out', dest='stream_out', default=None)
    _add_common(gen)

    topk = subparsers.add_parser('track-topk',
                                 help='track the top-k influential individuals')
    topk.add_argument('--graph', required=True)
    topk.add_argument('--stream', default=None)
    topk.add_argument('--k', type=int, default=None)
    topk.add_argument('--summary', action='store_true')
    _add_sampling(topk)
    _add_common(topk)

    im = subparsers.add_parser('track-im',
                               help='track RR sets for influence maximization queries')
    im.add_argument('--graph', required=True)
    im.add_argument('--stream', default=None)
    im.add_argument('--kmax', type=int, default=None)
    im.add_argument('--mode', choices=['practical', 'theoretical'],
                    default=None)
    im.add_argument('--tau', type=int, default=None)
    im.add_argument('--summary', action='store_true')
    _add_sampling(im)
    _add_common(im)

    oracle = subparsers.add_parser('oracle',
                                   help='exact or Monte-Carlo ground truth')
    tasks = oracle.add_subparsers(dest='task', parser_class=_ArgumentParser)
    for task in ORACLE_TASKS:
        sub = tasks.add_parser(task)
        sub.add_argument('--graph', required=True)
        if task == 'opt-seed':
            sub.add_argument('--k', type=int, required=True)
        else:
            sub.add_argument('--seeds', type=_seed_list, required=True,
                             help='comma separated seed set')
        _add_common(sub)

    evaluate = subparsers.add_parser('eval',
                                     help='evaluate a seed set on an independent RR pool')
    evaluate.add_argument('--graph', required=True)
    evaluate.add_argument('--seeds', required=True,
                          help='comma separated seed set or a seed file')
    _add_common(evaluate)

    bench = subparsers.add_parser('bench',
                                  help='time New Greedy and tracker updates')
    bench.add_argument('--graph', default=None)
    bench.add_argument('--stream', default=None)
    bench.add_argument('--k', type=int, default=None)
    _add_common(bench)
    return parser


def args_to_opts(args):
    """
    Translate the flags of a subcommand into `KEY VALUE` config overrides,
    merged before the trailing opts.
    """
    opts = []

    def put(key, value):
        if value is not None:
            opts.extend([key, str(value)])

    put('seed', args.seed)
    put('model', args.model)
    if args.command == 'gen-stream':
        put('stream.full_graph', args.graph)
        put('stream.fractions', args.fractions)
        put('stream.base_out', args.base_out)
        put('stream.stream_out', args.stream_out)
    elif args.command == 'track-topk':
        put('topk.k', args.k)
        put('sketch.eps', args.eps)
        put('sketch.delta', args.delta)
    elif args.command == 'track-im':
        put('im.k_max', args.kmax)
        put('im.mode', args.mode)
        put('im.tau', args.tau)
        put('im.eps', args.eps)
        put('im.delta', args.delta)
    elif args.command == 'bench':
        put('bench.k', args.k)
    if args.command in ['track-topk', 'track-im']:
        put('report.out', args.out)
        if args.summary:
            put('report.summary', True)
    return opts


def parse_args(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) == 0:
        parser.print_help()
        sys.exit(1)
    args = parser.parse_args(argv)
    if args.command is None:
        parser.error('a subcommand is required')
    if args.command == 'oracle' and args.task is None:
        parser.error(f'oracle needs one of {ORACLE_TASKS}')
    return args
