####################################################################################################
# ppedge/util.py
# Utility functions shared across ppedge: predicates, immutable arrays, hashing, lazy merging, the
# package's exception types, and CSV/JSON I/O.

import inspect, os, json, hashlib, base64, numbers, six
import collections as colls, numpy as np, pyrsistent as ps, pandas as pd
from collections import abc as collsABC

####################################################################################################
# Exceptions

class DomainError(ValueError):
    '''
    DomainError is raised when an argument lies outside of the domain on which an operation is
    defined, e.g., an x-value outside of [0,1] or a boundary function whose infimum is not positive.
    '''
    pass
class NumericError(ArithmeticError):
    '''
    NumericError is raised when a numerical procedure, such as adaptive quadrature, fails to reach
    its requested tolerance.
    '''
    pass
class StudyError(RuntimeError):
    '''
    StudyError(msg, n, replication) is raised when a Monte Carlo replication fails; the sample size
    n and the replication index are stored in the n and replication members, and the original
    exception is chained as the __cause__.
    '''
    def __init__(self, msg, n=None, replication=None):
        RuntimeError.__init__(self, msg)
        self.n = n
        self.replication = replication

def getargspec_py27like(f):
    '''
    getargspec_py27like(f) yields the tuple (args, varargs, varkw, defaults) for the function f.
    '''
    return inspect.getfullargspec(f)[:4]

####################################################################################################
# Predicates

def is_str(arg):
    '''
    is_str(x) yields True if x is a string object and False otherwise.
    '''
    return isinstance(arg, six.string_types)
def is_int(arg):
    '''
    is_int(x) yields True if x is an integer (a Python int or a numpy integer scalar) and False
      otherwise; booleans are not considered integers.
    '''
    if isinstance(arg, (bool, np.bool_)): return False
    return isinstance(arg, six.integer_types + (np.integer,))
def is_real(arg):
    '''
    is_real(x) yields True if x is a real number (including integers but not booleans) and False
      otherwise.
    '''
    if isinstance(arg, (bool, np.bool_)): return False
    return isinstance(arg, (numbers.Real, np.floating, np.integer))
def is_map(arg):
    '''
    is_map(x) yields True if x implements Python's builtin Mapping class.
    '''
    return isinstance(arg, collsABC.Mapping)
def is_pmap(arg):
    '''
    is_pmap(x) yields True if x is a persistent map object (a pyrsistent PMap).
    '''
    return isinstance(arg, ps.PMap)
def is_set(arg):
    '''
    is_set(x) yields True if x is a set or frozenset.
    '''
    return isinstance(arg, (set, frozenset))
def is_vector(u, dtype=None):
    '''
    is_vector(u) yields True if u is a 1D sequence or array and False otherwise. Strings and maps
      are never vectors.
    is_vector(u, dtype) additionally requires that the elements of u be a numpy subtype of dtype.
    '''
    if u is None or is_str(u) or is_map(u): return False
    if not isinstance(u, (list, tuple, np.ndarray, ps.PVector)): return False
    try: a = np.asarray(u)
    except Exception: return False
    if a.ndim != 1: return False
    return True if dtype is None else np.issubdtype(a.dtype, dtype)

####################################################################################################
# Argument coercion used by the @param transforms of the domain types

def to_real(x, name, lower=None, strict=True, upper=None):
    '''
    to_real(x, name) yields float(x) if x is a finite real number and raises a DomainError that
      names the given argument otherwise.

    The optional arguments lower and upper bound the value; if strict is True (the default), the
    lower bound is exclusive, otherwise it is inclusive. The upper bound is always inclusive.
    '''
    if not is_real(x):
        raise DomainError('%s must be a real number; got %r' % (name, x))
    x = float(x)
    if not np.isfinite(x):
        raise DomainError('%s must be finite; got %r' % (name, x))
    if lower is not None and (x <= lower if strict else x < lower):
        raise DomainError('%s must be %s %s; got %r' % (name, '>' if strict else '>=', lower, x))
    if upper is not None and x > upper:
        raise DomainError('%s must be <= %s; got %r' % (name, upper, x))
    return x
def to_int(x, name, lower=None):
    '''
    to_int(x, name) yields int(x) if x is an integer (or an integer-valued float) and raises a
      DomainError naming the argument otherwise. If lower is given, x must be at least lower.
    '''
    if is_real(x) and not is_int(x) and float(x).is_integer(): x = int(x)
    if not is_int(x):
        raise DomainError('%s must be an integer; got %r' % (name, x))
    x = int(x)
    if lower is not None and x < lower:
        raise DomainError('%s must be >= %s; got %r' % (name, lower, x))
    return x

def imm_array(q, dtype=None):
    '''
    imm_array(val) yields a version of val that is wrapped in numpy's ndarray class. If val is a
      read-only numpy array, then it is returned as-is; if it is not, then it is copied into a new
      array, the read-only flag is set on the new object, and it is returned.
    imm_array(val, dtype) additionally casts the array to the given dtype.
    '''
    if not isinstance(q, np.ndarray) or q.flags['WRITEABLE'] or \
       (dtype is not None and q.dtype != np.dtype(dtype)):
        q = np.array(q, dtype=dtype)
        q.setflags(write=False)
    return q

####################################################################################################
# Hashing and JSON forms

def qhashform(o):
    '''
    qhashform(o) yields a version of o that is hashable and that hashes consistently across
      instances and processes. This correctly handles numpy arrays, maps, sets, and immutable
      ppedge objects (whose parameters are hashed along with their type name).
    '''
    from .immutable import (is_imm, imm_params)
    if is_imm(o):
        return ('__#imm', type(o).__name__, qhashform(imm_params(o)))
    elif isinstance(o, np.ndarray):
        a = np.ascontiguousarray(o)
        return ('__#ndarray', str(a.dtype), tuple(a.shape),
                base64.b64encode(a.tobytes()).decode('utf-8'))
    elif isinstance(o, np.generic): return o.item()
    elif is_set(o):
        return ('__#set', tuple(sorted([qhashform(x) for x in o], key=repr)))
    elif is_map(o):
        kvs = sorted([(qhashform(k), qhashform(v)) for (k,v) in six.iteritems(o)],
                     key=lambda kv:repr(kv[0]))
        return ('__#dict', tuple(kvs))
    elif is_str(o): return o
    elif hasattr(o, '__iter__'): return tuple([qhashform(u) for u in o])
    else: return o
def qhash(o):
    '''
    qhash(o) is a hash function that operates like hash(o) but also handles numpy arrays, maps, and
      other normally unhashable objects by way of qhashform(o).
    '''
    return hash(qhashform(o))
def to_jsonable(obj):
    '''
    to_jsonable(obj) converts the given obj into an object that can be encoded into JSON using the
      json package's dumps() function: persistent maps become dicts, sequences and numpy arrays
      become lists, and numpy scalars become Python scalars. Map keys are converted to strings, and
      non-finite numbers (NaN and the infinities) become None, so that the result is strict JSON.
    '''
    from .immutable import (is_imm, imm_params)
    if is_imm(obj):                  return to_jsonable(imm_params(obj))
    elif is_map(obj):                return {str(k): to_jsonable(v) for (k,v) in six.iteritems(obj)}
    elif isinstance(obj, np.ndarray): return to_jsonable(obj.tolist())
    elif isinstance(obj, float):     return obj if np.isfinite(obj) else None
    elif isinstance(obj, np.generic): return to_jsonable(obj.item())
    elif is_str(obj):                return obj
    elif hasattr(obj, '__iter__'):   return [to_jsonable(u) for u in obj]
    else:                            return obj
def digest(o):
    '''
    digest(o) is like qhash(o) but produces a consistent sha256 hex digest string that is stable
      across processes and machines.
    '''
    jsstr = json.dumps(to_jsonable(qhashform(o)))
    return hashlib.sha256(jsstr.encode('utf-8')).hexdigest()

####################################################################################################
# Merging

def _flatten_maps(args):
    for arg in args:
        if arg is None: continue
        elif is_map(arg): yield arg
        elif is_str(arg) or not hasattr(arg, '__iter__'):
            raise TypeError('merge requires maps or sequences of maps; got %r' % (arg,))
        else:
            for m in _flatten_maps(arg): yield m
def merge(*args, **kwargs):
    '''
    merge(...) lazily collapses all arguments, which must be Mapping objects or lists/tuples of
      Mapping objects, into a single mapping from left-to-right; the keyword arguments are merged
      last. Values are not requested from any of the given maps until they are requested of the
      result, so the laziness of IMap objects passed to merge is preserved.
    '''
    maps = list(_flatten_maps(args))
    if kwargs: maps.append(kwargs)
    if len(maps) == 0: return ps.m()
    elif len(maps) == 1: return maps[0]
    return colls.ChainMap(*reversed(maps))

####################################################################################################
# Tabular and JSON I/O

def _ensure_parent(path):
    dirname = os.path.dirname(path)
    if dirname and not os.path.isdir(dirname): os.makedirs(dirname)
    return path
def write_csv(path, df, command=None):
    '''
    write_csv(path, df) writes the pandas DataFrame df to the given path as a CSV file with a header
      row and no index column, creating parent directories if needed; the path is returned.
    write_csv(path, df, command) additionally writes the comment line '# command' before the header.
    '''
    _ensure_parent(path)
    with open(path, 'w') as fl:
        if command is not None: fl.write('# %s\n' % (command,))
        df.to_csv(fl, index=False)
    return path
def read_csv(path, columns=None):
    '''
    read_csv(path) yields a pandas DataFrame of the CSV file at the given path; lines that begin
      with # are ignored.
    read_csv(path, columns) additionally requires that the given columns be present; a file with no
      data at all (zero bytes or only comments) yields an empty frame with these columns.
    '''
    try: df = pd.read_csv(path, comment='#')
    except pd.errors.EmptyDataError: df = pd.DataFrame({c: [] for c in (columns or [])})
    if columns is not None:
        missing = [c for c in columns if c not in df.columns]
        if missing: raise ValueError('file %s is missing columns: %s' % (path, missing))
    return df
def write_json(path, obj, command=None):
    '''
    write_json(path, obj) writes the JSON form of obj (see to_jsonable) to the given path.
    write_json(path, obj, command) requires obj to be a map and adds the key 'command'.
    '''
    data = to_jsonable(obj)
    if command is not None: data = dict(data, command=command)
    _ensure_parent(path)
    with open(path, 'w') as fl: json.dump(data, fl, indent=1, allow_nan=False)
    return path
def read_json(path):
    '''
    read_json(path) yields the object encoded in the JSON file at the given path.
    '''
    with open(path, 'r') as fl: return json.load(fl)
