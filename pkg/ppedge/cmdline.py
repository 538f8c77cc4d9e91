####################################################################################################
# ppedge/cmdline.py
# Command-line parsing, work logs, and the ppedge command-line interface.

import os, sys, textwrap, six
import numpy as np, pandas as pd, pyrsistent as pyr
from ast import literal_eval
from .util import (DomainError, is_map, is_str, is_vector, to_real, to_int, merge,
                   read_csv, read_json, write_csv)
from .immutable import (immutable, param, value)
from .model import (ProcessConfig, parse_boundary, polar_transform, inverse_polar)
from .sampler import (sample_process, cell_extremes, sample_to_frame, sample_from_frame,
                      extremes_to_frame)
from .basis import (BasisSpec, b1_ceiling)
from .estimator import (estimate_curve, curve_to_frame, coeffs_to_frame)
from .harness import (schedule, schedule_presets, study_config_from_json, run_study, save_report,
                      verify_kernel_bounds, kernel_diag_frame)

@immutable
class CommandLineParser(object):
    '''
    CommandLineParser(instructions) yields a command-line parser: a function that parses a list of
    command-line arguments into the pair (args, opts) of the positional arguments and the dict of
    options.

    Each instruction is a row (character, word, entry, default), where the default may be omitted
    (and is then None). The character and the word are the -c and --word forms of the option
    (either may be None), entry is its key in opts, and default its value when it is not given. A
    default of True or False makes the option a flag that takes no value and toggles the default.
    Single-character options may be bundled (-vk100); word options take their value either as the
    next argument or after an = sign; everything after -- is positional.

    Given values are read with ast.literal_eval and kept as strings when that fails. The option
    filters maps entries to functions that validate and convert the parsed values; a filter that
    raises is reported as a ValueError of the form '--word: reason'. Unrecognized options raise a
    ValueError that names them.

    Example:
      parser = CommandLineParser([('v', 'verbose', 'verbose', False),
                                  (None, 'k',       'k',       None)])
      parser(['-v', '--k', '100'])
      # ==> ([], {'verbose': True, 'k': 100})
    '''
    @staticmethod
    def parse_literal(s):
        '''
        CommandLineParser.parse_literal(s) yields ast.literal_eval(s), or s itself if s is not a
          literal.
        '''
        try:              return literal_eval(s)
        except Exception: return s
    def __init__(self, instructions, filters=None):
        self.instructions = instructions
        self.filters = filters
    @param
    def instructions(rows):
        res = []
        for row in rows:
            if is_str(row) or not hasattr(row, '__len__') or not 3 <= len(row) <= 4 or \
               any(x is not None and not is_str(x) for x in row[:3]) or row[2] is None:
                raise ValueError('Invalid instruction row: %s' % (row,))
            res.append(tuple(row) + (None,) * (4 - len(row)))
        return tuple(res)
    @param
    def filters(fs):
        if not fs: return pyr.m()
        if not is_map(fs): raise ValueError('filters must be a mapping of entries to functions')
        return pyr.pmap(fs)
    @value
    def default_values(instructions):
        '''
        parser.default_values maps each entry to its default value.
        '''
        return pyr.pmap({entry: dflt for (_, _, entry, dflt) in instructions})
    @value
    def switches(instructions):
        '''
        parser.switches maps each option token (-c or --word) to the pair (entry, is_flag).
        '''
        res = {}
        for (c, w, entry, dflt) in instructions:
            flag = dflt is True or dflt is False
            if c is not None: res['-' + c] = (entry, flag)
            if w is not None: res['--' + w] = (entry, flag)
        return pyr.pmap(res)
    @value
    def entry_names(instructions):
        '''
        parser.entry_names maps each entry to the option name used for it in error messages.
        '''
        return pyr.pmap({entry: ('--' + w if w is not None else
                                 '-' + c  if c is not None else entry)
                         for (c, w, entry, _) in instructions})
    def _switch(self, token):
        sw = self.switches.get(token)
        if sw is None: raise ValueError('unrecognized option: %s' % (token,))
        return sw
    def __call__(self, *args):
        if args and not is_str(args[0]) and is_vector(args[0]):
            args = tuple(args[0]) + tuple(args[1:])
        dflts = self.default_values
        (opts, given, rest) = (dict(dflts), set(), [])
        (pending, options_done) = (None, False)
        for arg in args:
            if pending is not None:
                opts[pending] = arg
                given.add(pending)
                pending = None
            elif arg == '--' and not options_done:
                options_done = True
            elif options_done or not arg.startswith('-') or arg == '-' or _is_number(arg):
                if arg != '': rest.append(arg)
            elif arg.startswith('--'):
                (token, eq, val) = arg.partition('=')
                (entry, flag) = self._switch(token)
                if flag and eq: raise ValueError('%s: flags take no value' % (token,))
                elif flag: opts[entry] = not dflts[entry]
                elif eq:
                    opts[entry] = val
                    given.add(entry)
                else: pending = entry
            else:
                for (ii, c) in enumerate(arg[1:]):
                    (entry, flag) = self._switch('-' + c)
                    if flag:
                        opts[entry] = not dflts[entry]
                        continue
                    if arg[ii+2:]:
                        opts[entry] = arg[ii+2:]
                        given.add(entry)
                    else: pending = entry
                    break
        if pending is not None:
            raise ValueError('%s: missing value' % (self.entry_names[pending],))
        for (k, v) in list(opts.items()):
            if v is None: continue
            if k in given and is_str(v): v = self.parse_literal(v)
            f = self.filters.get(k)
            if f is not None:
                try: v = f(v)
                except EnvironmentError: raise
                except Exception as e:
                    six.raise_from(ValueError('%s: %s' % (self.entry_names.get(k, k), e)), e)
            opts[k] = v
        return (rest, opts)

def _is_number(s):
    try: float(s)
    except ValueError: return False
    return True

class WorkLog(object):
    '''
    WorkLog(columns, bullet, stdout, stderr) is a bullet-point printer for progress reports (on
    stdout) and warnings (on stderr); either stream may be None to silence it. Text is word-wrapped
    to the given number of columns.
    '''
    def __init__(self, columns=80, bullet='  * ', stdout=Ellipsis, stderr=Ellipsis):
        self.stdout = sys.stdout if stdout is Ellipsis else stdout
        self.stderr = sys.stderr if stderr is Ellipsis else stderr
        self.columns = columns
        self.bullet = bullet
    def indent(self, n=1):
        '''
        log.indent() yields a copy of log whose bullets are indented one level deeper.
        log.indent(n) indents n levels.
        '''
        pad = ' ' * (len(self.bullet) * n)
        return WorkLog(self.columns, pad + self.bullet, self.stdout, self.stderr)
    def _format(self, items):
        hang = '\n' + ' ' * len(self.bullet)
        width = max(self.columns - len(self.bullet), 20)
        wrap = lambda s: hang.join(textwrap.wrap(s.strip(), width))
        return ''.join('%s%s\n' % (self.bullet, wrap(u) if is_str(u) else
                                   ('\n' + hang).join(wrap(p) for p in u))
                       for u in items)
    def _emit(self, stream, items):
        if stream is None: return None
        r = stream.write(self._format(items))
        stream.flush()
        return r
    def __call__(self, *args):
        '''
        log(a, b...) prints each argument as a bullet point on the log's stdout. An argument may be a
          string or a list of strings, which are printed as paragraphs of one bullet.
        '''
        return self._emit(self.stdout, args)
    def warn(self, *args):
        '''
        log.warn(a, b...) is log(a, b...) printed on the log's stderr.
        '''
        return self._emit(self.stderr, args)

def worklog(columns=None, bullet='  * ', stdout=Ellipsis, stderr=Ellipsis, verbose=False):
    '''
    worklog(columns) yields a WorkLog that wraps its text to the given width; when columns is None,
      the width comes from the COLUMNS environment variable and falls back to 80.

    Progress bullets go to stdout only when verbose is True, unless a stream (or None for silence)
    is passed explicitly; warnings go to stderr, which defaults to sys.stderr.
    '''
    if columns is None:
        columns = os.environ.get('COLUMNS', '')
        columns = int(columns) if columns.isdigit() else 80
    if stdout is Ellipsis and not verbose: stdout = None
    return WorkLog(columns, bullet, stdout, stderr)

####################################################################################################
# Filters for command-line values

def _path(u):
    if u is None or (is_str(u) and u == ''): raise ValueError('a path is required')
    return str(u)
def _positive_real(name):
    return lambda u: to_real(u, name, lower=0)
def _int_at_least(name, lower):
    return lambda u: to_int(u, name, lower=lower)
def _int_list(name, lower):
    def _filter(u):
        us = list(u) if is_vector(u) else [u]
        if not us: raise DomainError('%s must not be empty' % name)
        return tuple(to_int(x, name, lower=lower) for x in us)
    return _filter
def _center(u):
    if is_str(u): u = [s for s in u.replace(',', ' ').split()]
    if not hasattr(u, '__len__') or len(u) != 2:
        raise DomainError('the center must be a pair u0,v0')
    return (to_real(float(u[0]), 'u0'), to_real(float(u[1]), 'v0'))
def _family(u):
    return BasisSpec(str(u), 0).family
def _preset(u):
    if u not in schedule_presets:
        raise DomainError('preset must be one of %s' % (', '.join(schedule_presets),))
    return u

_common_schema = (('v',  'verbose', 'verbose', False),
                  (None, 'help',    'help',    False),
                  (None, 'config',  'config',  None),
                  (None, 'threads', 'threads', None))
_common_filters = {'config': _path, 'threads': _int_at_least('threads', 1)}

_schemas = {
    'sample': ((None, 'boundary', 'boundary', None),
               (None, 'nc',       'nc',       None),
               (None, 'seed',     'seed',     None),
               ('o',  'out',      'out',      None)),
    'estimate': (('i',  'in',            'in',            None),
                 (None, 'k',             'k',             None),
                 (None, 'h',             'h',             None),
                 (None, 'basis',         'basis',         None),
                 (None, 'grid',          'grid',          None),
                 ('o',  'out',           'out',           None),
                 (None, 'coeffs-out',    'coeffs_out',    None),
                 (None, 'extremes-out',  'extremes_out',  None),
                 (None, 'boundary',      'boundary',      None),
                 (None, 'no-correction', 'no_correction', False)),
    'study': ((None, 'boundary',     'boundary',     None),
              (None, 'n-values',     'n_values',     None),
              (None, 'schedule',     'schedule',     None),
              (None, 'pairs',        'pairs',        None),
              (None, 'c',            'c',            None),
              (None, 'epsilon',      'epsilon',      None),
              (None, 'replications', 'replications', None),
              (None, 'eval-grid',    'eval_grid',    None),
              (None, 'mise-grid',    'mise_grid',    None),
              (None, 'seed',         'seed',         None),
              (None, 'basis',        'family',       None),
              (None, 'name',         'name',         None),
              (None, 'out-dir',      'out_dir',      None)),
    'kernel-diag': ((None, 'preset',      'preset',      None),
                    (None, 'n-values',    'n_values',    None),
                    (None, 'epsilon',     'epsilon',     None),
                    (None, 'k',           'k',           None),
                    (None, 'h',           'h',           None),
                    (None, 'basis',       'basis',       None),
                    (None, 'grid',        'grid',        None),
                    ('o',  'out',         'out',         None),
                    (None, 'summary-out', 'summary_out', None)),
    'star-shape': (('i',  'in',     'in',     None),
                   (None, 'center', 'center', None),
                   (None, 'k',      'k',      None),
                   (None, 'h',      'h',      None),
                   (None, 'basis',  'basis',  None),
                   (None, 'grid',   'grid',   None),
                   ('o',  'out',    'out',    None))}
_filters = {
    'sample':      {'boundary': parse_boundary, 'nc': _positive_real('nc'),
                    'seed': _int_at_least('seed', 0), 'out': _path},
    'estimate':    {'in': _path, 'k': _int_at_least('k', 1), 'h': _int_at_least('h', 0),
                    'basis': _family, 'grid': _int_at_least('grid', 1), 'out': _path,
                    'coeffs_out': _path, 'extremes_out': _path, 'boundary': parse_boundary},
    'study':       {'n_values': _int_list('n', 1), 'schedule': _preset,
                    'c': _positive_real('c'), 'epsilon': _positive_real('epsilon'),
                    'replications': _int_at_least('replications', 2),
                    'mise_grid': _int_at_least('mise_grid', 64),
                    'seed': _int_at_least('seed', 0), 'family': _family, 'out_dir': _path},
    'kernel-diag': {'preset': _preset, 'n_values': _int_list('n', 16),
                    'epsilon': _positive_real('epsilon'), 'k': _int_list('k', 1),
                    'h': _int_list('h', 0), 'basis': _family, 'grid': _int_at_least('grid', 1),
                    'out': _path, 'summary_out': _path},
    'star-shape':  {'in': _path, 'center': _center, 'k': _int_at_least('k', 1),
                    'h': _int_at_least('h', 0), 'basis': _family,
                    'grid': _int_at_least('grid', 1), 'out': _path}}
_defaults = {
    'sample':      {'seed': 0},
    'estimate':    {'basis': 'trig', 'grid': 101, 'no_correction': False},
    'study':       {},
    'kernel-diag': {'basis': 'trig', 'grid': 101, 'epsilon': 0.01},
    'star-shape':  {'basis': 'trig', 'grid': 360}}

def command_parser(subcommand):
    '''
    command_parser(subcommand) yields the CommandLineParser of the given ppedge subcommand.
    '''
    if subcommand not in _schemas:
        raise ValueError('unrecognized subcommand: %s' % (subcommand,))
    return CommandLineParser(_common_schema + _schemas[subcommand],
                             filters=merge(_common_filters, _filters[subcommand]))

def parse_command(subcommand, args):
    '''
    parse_command(subcommand, args) parses the given command-line arguments of a subcommand and
      yields the map of its options, layered from left to right (later wins): built-in defaults,
      the JSON file named by --config (if any), and the explicitly given options.
    '''
    parser = command_parser(subcommand)
    (rest, opts) = parser(args)
    if rest: raise ValueError('unexpected argument: %s' % (rest[0],))
    explicit = {k: v for (k, v) in six.iteritems(opts) if v is not None and v is not False}
    layers = [_defaults[subcommand]]
    if 'config' in explicit and subcommand != 'study':
        cfg = read_json(explicit['config'])
        if not is_map(cfg): raise ValueError('--config: the file must hold a JSON object')
        unknown = sorted(k for k in cfg if k not in parser.default_values)
        if unknown: raise ValueError('--config: unrecognized keys: %s' % (unknown,))
        (_, cfg) = parser([a for (k, v) in six.iteritems(cfg) for a in _as_argv(parser, k, v)])
        layers.append({k: v for (k, v) in six.iteritems(cfg) if v is not None and v is not False})
    layers.append(explicit)
    return dict(merge(layers))
def _as_argv(parser, entry, val):
    word = parser.entry_names[entry]
    if val is True: return [word]
    elif val is False or val is None: return []
    return [word, val if is_str(val) else repr(val)]

def _require(opts, *entries):
    for e in entries:
        if opts.get(e) is None:
            raise ValueError('--%s is required' % (e.replace('_', '-'),))
def _basis(opts):
    try: return BasisSpec(opts['basis'], opts['h'])
    except DomainError as e: six.raise_from(DomainError('--h: %s' % (e,)), e)

####################################################################################################
# Subcommands

def cmd_sample(opts, command, log, stdout):
    '''
    cmd_sample(opts, command, log, stdout) draws a point sample of the boundary --boundary at total
      intensity --nc with seed --seed and writes it to --out as a CSV file with columns x and y.
    '''
    _require(opts, 'boundary', 'nc', 'out')
    cfg = ProcessConfig(1, opts['nc'], seed=opts['seed'])
    log('sampling %s at nc = %g with seed %d' % (opts['boundary'].variant, cfg.total_intensity,
                                                 cfg.seed))
    s = sample_process(opts['boundary'], cfg)
    write_csv(opts['out'], sample_to_frame(s), command=command)
    stdout.write('%d points written to %s\n' % (s.count, opts['out']))
    return 0
def cmd_estimate(opts, command, log, stdout):
    '''
    cmd_estimate(opts, command, log, stdout) estimates the boundary from the points in the CSV file
      --in with --k cells and the --basis family truncated at --h, on a uniform grid of --grid
      points; the curve is written to --out and the coefficients to --coeffs-out. If --extremes-out
      is given, the per-cell counts, maxima, and minima are written there as well.
    '''
    _require(opts, 'in', 'k', 'h', 'out')
    spec = _basis(opts)
    coeffs_out = opts.get('coeffs_out') or (os.path.splitext(opts['out'])[0] + '_coeffs.csv')
    s = sample_from_frame(read_csv(opts['in'], columns=['x', 'y']))
    log('estimating from %d points with k = %d, h = %d (%s)' % (s.count, opts['k'], spec.h,
                                                               spec.family))
    ext = cell_extremes(s, opts['k'])
    if ext.empty_cells: log('%d of %d cells are empty' % (ext.empty_cells, ext.k))
    curve = estimate_curve(ext, spec, np.linspace(0, 1, opts['grid']))
    frame = curve_to_frame(curve, opts.get('boundary'), corrected=not opts['no_correction'])
    write_csv(opts['out'], frame, command=command)
    write_csv(coeffs_out, coeffs_to_frame(curve), command=command)
    if opts.get('extremes_out'):
        write_csv(opts['extremes_out'], extremes_to_frame(ext), command=command)
        log('cell extremes written to %s' % (opts['extremes_out'],))
    stdout.write('estimate written to %s; coefficients written to %s\n' % (opts['out'], coeffs_out))
    return 0
def cmd_study(opts, command, log, stdout):
    '''
    cmd_study(opts, command, log, stdout) runs the Monte Carlo study described by the JSON file
      --config, overridden by any inline options, and writes its report under --out-dir (default:
      the PPEDGE_OUTPUT_DIR environment variable, or the current directory). The exit code is 2 if
      any of the report's assertions fails.
    '''
    data = {}
    if opts.get('config') is not None:
        data = read_json(opts['config'])
        if not is_map(data): raise ValueError('--config: the file must hold a JSON object')
    keys = ('boundary', 'n_values', 'schedule', 'c', 'epsilon', 'replications', 'eval_grid',
            'mise_grid', 'seed', 'family', 'name')
    inline = {k: opts[k] for k in keys if opts.get(k) is not None}
    if opts.get('pairs') is not None:
        if inline.get('schedule', 'custom') != 'custom':
            raise ValueError('--pairs: pairs require the custom schedule')
        inline['schedule'] = {'custom': opts['pairs']}
    elif inline.get('schedule') == 'custom':
        prior = data.get('schedule')
        if not is_map(prior): raise ValueError('--schedule: the custom schedule requires --pairs')
        inline['schedule'] = prior
    cfg = study_config_from_json(dict(merge(data, inline)))
    # schedules are validated before any sampling
    cfg.ks
    out_dir = opts.get('out_dir') or os.environ.get('PPEDGE_OUTPUT_DIR') or '.'
    report = run_study(cfg, threads=opts.get('threads'), log=log)
    root = save_report(report, out_dir, command=command)
    stdout.write('report written to %s (digest %s)\n' % (root, report.digest))
    failed = [(k, d) for (k, (ok, d)) in sorted(report.assertions.items()) if not ok]
    for (k, d) in failed: log.warn('assertion %s failed: %s' % (k, d))
    return 2 if failed else 0
def cmd_kernel_diag(opts, command, log, stdout):
    '''
    cmd_kernel_diag(opts, command, log, stdout) writes the kernel-row norms B_1, B_2, B_3, and B_inf
      on a uniform grid of --grid points, either along the schedule --preset at each of --n-values
      or for the (--k, --h) pairs, to --out; --summary-out optionally receives the summary table of
      verify_kernel_bounds.
    '''
    _require(opts, 'out')
    grid = np.linspace(0, 1, opts['grid'])
    preset = opts.get('preset')
    if preset is not None and preset != 'custom':
        _require(opts, 'n_values')
        ns = opts['n_values']
        pairs = [schedule(n, preset, opts['epsilon']) for n in ns]
    else:
        _require(opts, 'k', 'h')
        (ks, hs) = (opts['k'], opts['h'])
        if len(ks) == 1: ks = ks * len(hs)
        if len(hs) == 1: hs = hs * len(ks)
        if len(ks) != len(hs): raise ValueError('--h: --k and --h lists must have equal lengths')
        (ns, pairs, preset) = (opts.get('n_values'), list(zip(ks, hs)), 'custom')
    frames = []
    for (k, h) in pairs:
        try: spec = BasisSpec(opts['basis'], h)
        except DomainError as e: six.raise_from(DomainError('--h: %s' % (e,)), e)
        if k <= 2*(h + 1):
            log.warn('b1 ceiling %.4g does not apply: k = %d is not above 2(h+1) = %d' % (
                b1_ceiling(k, h), k, 2*(h + 1)))
        log('k = %d, h = %d' % (k, h))
        frames.append(kernel_diag_frame(spec, k, grid))
    summary = verify_kernel_bounds(preset, ns, grid, epsilon=opts['epsilon'], pairs=pairs,
                                   family=opts['basis'], log=log)
    write_csv(opts['out'], pd.concat(frames, ignore_index=True), command=command)
    if opts.get('summary_out'):
        write_csv(opts['summary_out'], summary, command=command)
    stdout.write('kernel bounds for %d (k, h) pairs written to %s\n' % (len(pairs), opts['out']))
    return 0
def cmd_star_shape(opts, command, log, stdout):
    '''
    cmd_star_shape(opts, command, log, stdout) estimates the radius function of a star-shaped set
      about --center from the planar points (columns u and v) in the CSV file --in, and writes the
      closed boundary polygon, with the columns theta, r_hat, r_tilde, u, and v, to --out. Angles
      theta are in turns (theta_j = j/G).
    '''
    _require(opts, 'in', 'center', 'k', 'h', 'out')
    spec = _basis(opts)
    df = read_csv(opts['in'], columns=['u', 'v'])
    uv = np.column_stack([df['u'].values.astype(float), df['v'].values.astype(float)])
    s = polar_transform(uv, opts['center'])
    ext = cell_extremes(s, opts['k'])
    if ext.empty_cells:
        log.warn('%d of %d angular cells are empty; the center may lie outside the point cloud'
                 % (ext.empty_cells, ext.k))
    theta = np.arange(opts['grid']) / float(opts['grid'])
    curve = estimate_curve(ext, spec, theta)
    polygon = inverse_polar(np.column_stack([theta, curve.corrected]), opts['center'])
    frame = pd.DataFrame({'theta': theta, 'r_hat': np.asarray(curve.raw),
                          'r_tilde': np.asarray(curve.corrected),
                          'u': polygon[:,0], 'v': polygon[:,1]},
                         columns=['theta', 'r_hat', 'r_tilde', 'u', 'v'])
    frame = pd.concat([frame, frame.iloc[:1]], ignore_index=True)
    write_csv(opts['out'], frame, command=command)
    stdout.write('boundary polygon of %d vertices written to %s\n' % (len(frame), opts['out']))
    return 0

commands = pyr.pmap({'sample':      cmd_sample,
                     'estimate':    cmd_estimate,
                     'study':       cmd_study,
                     'kernel-diag': cmd_kernel_diag,
                     'star-shape':  cmd_star_shape})

usage = '''Usage: ppedge <command> [options]
Commands:
  sample       --boundary B --nc X [--seed S] --out points.csv
  estimate     --in points.csv --k K --h H [--basis trig|haar] [--grid G] --out curve.csv
               [--coeffs-out coeffs.csv] [--extremes-out cells.csv] [--boundary B]
               [--no-correction]
  study        [--config study.json] [--boundary B --n-values [n...] --schedule S ...]
               [--out-dir DIR]
  kernel-diag  (--preset P --n-values [n...] | --k K --h H) [--grid G] --out bounds.csv
               [--summary-out summary.csv]
  star-shape   --in uv.csv --center u0,v0 --k K --h H [--grid G] --out polygon.csv
Common options: --verbose/-v, --threads N, --config FILE, --help.
Boundaries are JSON objects or presets such as constant:1 or sinusoid:1,0.5,1,0.
'''

def main(argv=None, stdout=None, stderr=None):
    '''
    main(argv) runs the ppedge command line on the given argument list (default: sys.argv[1:]) and
      yields the exit code: 0 on success, 1 for usage, validation, and computation errors, 2 when a
      study's assertions fail, and 3 for I/O errors.
    '''
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    err = worklog(stdout=None, stderr=stderr)
    if not argv:
        stderr.write(usage)
        return 1
    elif argv[0] in ('-h', '--help', 'help'):
        stdout.write(usage)
        return 0
    (sub, args) = (argv[0], argv[1:])
    if sub not in commands:
        err.warn('unrecognized command: %s' % (sub,))
        stderr.write(usage)
        return 1
    command = ' '.join(['ppedge'] + argv)
    try:
        opts = parse_command(sub, args)
        if opts.get('help'):
            stdout.write(usage)
            return 0
        log = worklog(stdout=stdout if opts.get('verbose') else None, stderr=stderr)
        return commands[sub](opts, command, log, stdout)
    except OSError as e:
        err.warn('%s: %s' % (type(e).__name__, e))
        return 3
    except (ValueError, TypeError, ArithmeticError, RuntimeError) as e:
        err.warn('%s: %s' % (type(e).__name__, e))
        return 1
