####################################################################################################
# ppedge/immutable.py
# Class decorator for immutable, lazily-evaluated domain types.

import copy, six
from .util import (getargspec_py27like, qhash)

# An instance keeps its state in its __dict__ under this key: 'init' while its __init__ runs,
# 'transient' while its params may still be edited, and nothing once it is persistent.
_state_key = '_ppedge_state_'

class _ImmMembers(object):
    '''
    _ImmMembers(params, values, checks) describes the members of an immutable class:
      * params maps each param name to (default, transform), where default is None for a required
        param and the 1-tuple (value,) otherwise;
      * values maps each lazy value name to (inputs, fn);
      * checks maps each requirement name to (inputs, fn);
      * dependants maps each param and value to the set of values computed from it;
      * triggers maps each param to the sorted names of the requirements that must be rerun when
        it changes.
    Inputs of values and requirements that are not declared members become required params.
    '''
    def __init__(self, params, values, checks):
        self.params = params
        self.values = values
        self.checks = checks
        for (inputs, _) in list(values.values()) + list(checks.values()):
            for name in inputs:
                if name not in params and name not in values: params[name] = (None, None)
        self.dependants = {name: set() for name in list(params) + list(values)}
        for v in values:
            for a in self._ancestors(v, ()): self.dependants[a].add(v)
        self.triggers = {}
        for p in params:
            touched = self.dependants[p] | set([p])
            self.triggers[p] = tuple(sorted(c for (c, (inputs, _)) in six.iteritems(checks)
                                            if touched.intersection(inputs)))
    def _ancestors(self, name, path):
        if name in path:
            raise RuntimeError('circular dependency in immutable: value \'%s\'' % name)
        res = set()
        for i in self.values[name][0]:
            res.add(i)
            if i in self.values: res |= self._ancestors(i, path + (name,))
        return res

def _members(imm):
    return type(imm)._ppedge_members_
def _dict(imm):
    return object.__getattribute__(imm, '__dict__')
def _state(imm):
    return _dict(imm).get(_state_key)
def _run_checks(imm, names, error, action):
    for name in names:
        (inputs, fn) = _members(imm).checks[name]
        if not fn(*[getattr(imm, i) for i in inputs]):
            raise error('Requirement %s on members %s failed %s %s' % (
                name, inputs, action, type(imm).__name__))
    return imm

def is_imm(obj):
    '''
    is_imm(obj) yields True if obj is an instance of an immutable class and False otherwise.
    '''
    return hasattr(type(obj), '_ppedge_members_')
def is_imm_type(cls):
    '''
    is_imm_type(cls) yields True if cls is an immutable class and False otherwise.
    '''
    return hasattr(cls, '_ppedge_members_')

def _imm_finish_init(imm):
    # init -> transient; every requirement runs once
    (dd, mem) = (_dict(imm), _members(imm))
    missing = sorted(p for p in mem.params if p not in dd)
    if missing:
        raise RuntimeError('Not all parameters of %s were set: %s' % (type(imm).__name__, missing))
    dd[_state_key] = 'transient'
    try: _run_checks(imm, sorted(mem.checks), RuntimeError, 'when constructing')
    except Exception:
        dd[_state_key] = 'init'
        for v in mem.values: dd.pop(v, None)
        raise
    return imm

def _imm_new(cls, *args, **kwargs):
    imm = object.__new__(cls)
    dd = _dict(imm)
    for (p, (dflt, _)) in six.iteritems(cls._ppedge_members_.params):
        if dflt is not None: dd[p] = dflt[0]
    dd[_state_key] = 'init'
    return imm
def _imm_default_init(self, *args, **kwargs):
    '''
    The default initializer of an immutable accepts any number of dictionaries followed by any
    number of keyword arguments and sets all of them as params.
    '''
    for dct in (args + (kwargs,)):
        for (k,v) in six.iteritems(dct): setattr(self, k, v)
def _imm_getattribute(self, name):
    dd = object.__getattribute__(self, '__dict__')
    if name == '__dict__': return dd
    if name in dd: return dd[name]
    mem = type(self)._ppedge_members_
    if name in mem.params:
        raise RuntimeError('Required immutable parameter %s requested before set' % name)
    if name not in mem.values: return object.__getattribute__(self, name)
    if dd.get(_state_key) == 'init': _imm_finish_init(self)
    (inputs, fn) = mem.values[name]
    val = fn(*[getattr(self, i) for i in inputs])
    # two threads may race here; both results are equal and the first one stored wins
    return dd.setdefault(name, val)
def _imm_setattr(self, name, val):
    (dd, mem) = (_dict(self), _members(self))
    state = dd.get(_state_key)
    if state is None:
        raise TypeError('Attempt to change member \'%s\' of persistent immutable' % name)
    if name not in mem.params:
        raise TypeError('Attempt to change non-parameter member \'%s\' of immutable' % name)
    tx = mem.params[name][1]
    val = val if tx is None else tx(val)
    if state == 'init':
        dd[name] = val
        return
    deps = mem.dependants[name]
    saved = {k: dd[k] for k in deps if k in dd}
    saved[name] = dd[name]
    for k in deps: dd.pop(k, None)
    dd[name] = val
    try: _run_checks(self, mem.triggers[name], RuntimeError, 'when changing')
    except Exception:
        for k in deps: dd.pop(k, None)
        dd.update(saved)
        raise
def _imm_delattr(self, name):
    # deleting a value only drops its cache
    if name not in _members(self).values:
        raise TypeError('Cannot delete member \'%s\' of immutable' % name)
    _dict(self).pop(name, None)
def _imm_dir(self):
    names = set(dir(type(self))) | set(_dict(self)) | set(_members(self).values)
    names.discard(_state_key)
    return sorted(names)
def _imm_repr(self):
    return '%s%s(%s)' % (type(self).__name__, '' if _state(self) is None else '*',
                         ', '.join('%s=%r' % kv for kv in sorted(six.iteritems(imm_params(self)))))
def _imm_hash(self):
    c = type(self)
    return qhash((c.__module__, c.__name__, imm_params(self)))
def _imm_copy(self):
    if _state(self) == 'init': raise RuntimeError('Cannot copy an initializing immutable')
    dup = object.__new__(type(self))
    _dict(dup).update(_dict(self))
    return dup
def _imm_deepcopy(self, memo):
    return _imm_copy(self)

def imm_transient(imm):
    '''
    imm_transient(imm) yields a transient duplicate of the immutable imm, whose params may be set;
      each change reruns the requirements it touches and is rolled back if one of them fails.
    '''
    if not is_imm(imm): raise ValueError('imm_transient given non-immutable')
    dup = copy.copy(imm)
    _dict(dup)[_state_key] = 'transient'
    return dup
def imm_persist(imm):
    '''
    imm_persist(imm) makes the immutable imm persistent and returns it.
    '''
    if not is_imm(imm): raise ValueError('imm_persist given non-immutable')
    if _state(imm) == 'init': _imm_finish_init(imm)
    _dict(imm).pop(_state_key, None)
    return imm
def imm_copy(imm, **kwargs):
    '''
    imm_copy(imm, a=b, c=d...) yields a persistent copy of the immutable imm in which the params a,
      c, etc. have the values b, d, etc. The changed params are transformed as on construction and
      the requirements that depend on them are rerun; a failing requirement raises a ValueError.
      A persistent imm is returned as-is when nothing is changed.
    '''
    if not is_imm(imm): raise ValueError('imm_copy given non-immutable')
    if not kwargs and _state(imm) is None: return imm
    mem = _members(imm)
    dup = copy.copy(imm)
    dd = _dict(dup)
    dd.pop(_state_key, None)
    checks = set()
    for (p, v) in six.iteritems(kwargs):
        if p not in mem.params:
            raise ValueError('attempt to set non-parameter \'%s\' in imm_copy()' % p)
        tx = mem.params[p][1]
        dd[p] = v if tx is None else tx(v)
        for d in mem.dependants[p]: dd.pop(d, None)
        checks.update(mem.triggers[p])
    return _run_checks(dup, sorted(checks), ValueError, 'when copying')
def imm_params(imm):
    '''
    imm_params(imm) yields a dict of the params of the immutable imm.
    '''
    return {p: getattr(imm, p) for p in _members(imm).params}
def imm_values(imm):
    '''
    imm_values(imm) yields a dict of the lazy values of the immutable imm, computing any that are
      not yet cached.
    '''
    return {v: getattr(imm, v) for v in _members(imm).values}
def imm_is_persistent(imm):
    '''
    imm_is_persistent(imm) yields True if imm is a persistent immutable and False otherwise.
    '''
    return is_imm(imm) and _state(imm) is None

def _tag(kind, f, **extra):
    (args, varargs, kwargs, dflts) = getargspec_py27like(f)
    if varargs is not None or kwargs is not None or dflts:
        raise ValueError('@%s functions may not accept variadic or default arguments' % kind)
    if kind in ('param', 'option') and len(args) != 1:
        raise ValueError('@%s functions must take exactly one argument' % kind)
    f._ppedge_member_ = dict(extra, kind=kind, inputs=tuple(args))
    return staticmethod(f)
def value(f):
    '''
    The @value decorator marks a function of an immutable class as the calculator of a lazy value;
    its arguments name the members it is calculated from.
    '''
    return _tag('value', f)
def param(f):
    '''
    The @param decorator marks a function of an immutable class as the transformation of a required
    param: imm.abc = x stores type(imm).abc(x). The transformation may raise to reject x.
    '''
    return _tag('param', f)
def option(default_value):
    '''
    The @option(x) decorator is @param for a param that takes the untransformed default x when it
    is not given.
    '''
    return lambda f: _tag('option', f, default=(default_value,))
def require(f):
    '''
    The @require decorator marks a function of an immutable class as a requirement on the members
    named by its arguments. It runs when the object is constructed and whenever one of those
    members changes; it may raise an exception itself, and a falsy result rejects the change.
    '''
    return _tag('require', f)

def immutable(cls):
    '''
    The @immutable class decorator turns the decorated class into an immutable type whose members
    are declared with @param, @option(x), @value, and @require (see those decorators). Params are
    set in __init__ (by default, from dictionaries and keyword arguments); when __init__ returns,
    all requirements are checked and the object becomes persistent. Lazy values are calculated on
    first access and cached. Persistent objects reject changes; obj.copy(name=val...) yields a
    validated, modified copy, and obj.transient() an editable duplicate.
    '''
    (params, values, checks) = ({}, {}, {})
    for (name, f) in list(six.iteritems(vars(cls))):
        f = f.__func__ if isinstance(f, staticmethod) else f
        tag = getattr(f, '_ppedge_member_', None)
        if tag is None: continue
        kind = tag['kind']
        if   kind == 'param':  params[name] = (None, f)
        elif kind == 'option': params[name] = (tag['default'], f)
        elif kind == 'value':  values[name] = (tag['inputs'], f)
        else:                  checks[name] = (tag['inputs'], f)
    cls._ppedge_members_ = _ImmMembers(params, values, checks)
    initfn = _imm_default_init if cls.__init__ is object.__init__ else cls.__init__
    def _init_wrapper(imm, *args, **kwargs):
        initfn(imm, *args, **kwargs)
        imm_persist(imm)
    cls.__init__ = _init_wrapper
    cls.__new__ = staticmethod(_imm_new)
    cls.__getattribute__ = _imm_getattribute
    cls.__setattr__ = _imm_setattr
    cls.__delattr__ = _imm_delattr
    cls.__copy__ = _imm_copy
    cls.__deepcopy__ = _imm_deepcopy
    for (name, fn) in (('persist', imm_persist), ('transient', imm_transient),
                       ('copy', imm_copy), ('params', imm_params), ('values', imm_values)):
        if not hasattr(cls, name): setattr(cls, name, fn)
    for (name, fn) in (('__dir__', _imm_dir), ('__repr__', _imm_repr), ('__hash__', _imm_hash)):
        if getattr(cls, name, None) in (None, getattr(object, name)): setattr(cls, name, fn)
    return cls
