####################################################################################################
# ppedge/calculation.py
# Lazy calculation plans: named calc nodes wired together by their parameter names.

import types, six
import pyrsistent as ps, numpy as np
from collections import abc as collsABC
from .util import (merge, is_str, getargspec_py27like)

####################################################################################################
# The Calc, Plan, and IMap classes

class Calc(object):
    '''
    Calc(f, efferents, defaults) is a calculation node: it runs the function f on the inputs named
    by f's arguments (its afferents) and names the results with the given efferents. A node with no
    efferents is a check, run eagerly whenever its inputs are set. Calc objects are made with the
    @calc decorator.
    '''
    def __init__(self, f, efferents, defaults):
        (affs, varargs, kwargs, dflts) = getargspec_py27like(f)
        if varargs or kwargs: raise ValueError('@calc functions may only accept simple parameters')
        affs = tuple(affs)
        if set(affs) & set(efferents):
            raise ValueError('calc functions may not overwrite their parameters')
        if dflts: defaults = merge(dict(zip(affs[-len(dflts):], dflts)), defaults)
        object.__setattr__(self, 'function',  f)
        object.__setattr__(self, 'afferents', affs)
        object.__setattr__(self, 'efferents', tuple(efferents))
        object.__setattr__(self, 'defaults',  ps.pmap(dict(defaults)))
        object.__setattr__(self, 'name',      f.__module__ + '.' + f.__name__)
    def __setattr__(self, k, v):
        raise TypeError('Calc objects are immutable')
    def __delattr__(self, k):
        raise TypeError('Calc objects are immutable')
    @property
    def is_check(self):
        return len(self.efferents) == 0
    def __call__(self, *args, **kwargs):
        '''
        node(maps..., key=val...) runs the node on the given parameters, merged left-to-right over
          its defaults, and yields a dict of its efferents.
        '''
        opts = merge(self.defaults, args, kwargs)
        missing = [a for a in self.afferents if a not in opts]
        if missing:
            raise ValueError('required parameters not given to %s: %s' % (
                self.name, ', '.join(missing)))
        res = self.function(*[opts[a] for a in self.afferents])
        effs = self.efferents
        if len(effs) == 0: return {}
        elif len(effs) == 1: return {effs[0]: res}
        elif not isinstance(res, tuple) or len(res) != len(effs):
            raise ValueError('%s must yield a tuple of %d values' % (self.name, len(effs)))
        return dict(zip(effs, res))
    def set_defaults(self, *args, **kwargs):
        '''
        node.set_defaults(a=b...) yields a copy of node whose default values include the given ones.
        '''
        return Calc(self.function, self.efferents, merge(self.defaults, args, kwargs))

class Plan(object):
    '''
    Plan(nodes) bundles a map of named Calc nodes into a calculation. Its afferents are the inputs
    that no node calculates; calling the plan with them yields an IMap, in which each efferent is
    calculated the first time it is requested. Plans should be made with the plan() function.
    '''
    def __init__(self, nodes):
        nodes = ps.pmap({name: (node if isinstance(node, Calc) else calc(node))
                         for (name, node) in six.iteritems(nodes)})
        producers = {}
        inputs = set()
        defaults = {}
        for node in six.itervalues(nodes):
            inputs |= set(node.afferents)
            for eff in node.efferents:
                if eff in producers:
                    raise ValueError('value \'%s\' is calculated by more than one node' % (eff,))
                producers[eff] = node
            for (k, v) in six.iteritems(node.defaults):
                if k not in defaults: defaults[k] = v
                elif not _same(defaults[k], v):
                    raise ValueError('conflicting default values found for \'%s\': %s and %s' % (
                        k, v, defaults[k]))
        upstream = {}
        def _upstream(name, path):
            if name not in producers: return frozenset([name])
            if name in path: raise ValueError('circular dependency in plan at \'%s\'' % (name,))
            if name not in upstream:
                upstream[name] = frozenset().union(
                    *[_upstream(a, path + (name,)) for a in producers[name].afferents])
            return upstream[name]
        affs = tuple(sorted(inputs - set(producers)))
        checks = tuple(nodes[k] for k in sorted(nodes) if nodes[k].is_check)
        check_inputs = [frozenset().union(*[_upstream(a, ()) for a in c.afferents])
                        for c in checks]
        for eff in producers: _upstream(eff, ())
        object.__setattr__(self, 'nodes',      nodes)
        object.__setattr__(self, 'afferents',  affs)
        object.__setattr__(self, 'defaults',   ps.pmap(defaults))
        object.__setattr__(self, 'producers',  ps.pmap(producers))
        object.__setattr__(self, 'checks',     checks)
        # for each afferent: the efferents calculated from it and the checks that read it
        object.__setattr__(self, 'dependants', ps.pmap(
            {a: tuple(sorted(e for e in producers if a in upstream[e])) for a in affs}))
        object.__setattr__(self, 'triggers', ps.pmap(
            {a: tuple(c for (c, ins) in zip(checks, check_inputs) if a in ins) for a in affs}))
    def __setattr__(self, k, v):
        raise TypeError('Plan objects are immutable')
    def __delattr__(self, k):
        raise TypeError('Plan objects are immutable')
    @property
    def efferents(self):
        return tuple(sorted(self.producers.keys()))
    def __call__(self, *args, **kwargs):
        '''
        cplan(maps..., key=val...) yields the IMap of the plan cplan for the given parameters,
          merged left-to-right over the plan's defaults. The plan's checks run immediately.
        '''
        params = merge(self.defaults, args, kwargs)
        missing = [a for a in self.afferents if a not in params]
        if missing:
            raise ValueError('plan parameters not provided: %s' % (', '.join(missing),))
        extra = sorted(k for k in params if k not in self.afferents and k not in self.defaults)
        if extra:
            raise ValueError('unrecognized plan parameters: %s' % (', '.join(extra),))
        return IMap(self, {k: params[k] for k in self.afferents}, ps.m(), self.checks)
    def set(self, **kwargs):
        '''
        cplan.set(name=node...) yields a copy of cplan in which the named nodes are replaced.
        '''
        return Plan(self.nodes.update(kwargs))
    def discard(self, *names):
        '''
        cplan.discard(names...) yields a copy of cplan without the named nodes.
        '''
        nodes = self.nodes
        for name in names: nodes = nodes.discard(name)
        return Plan(nodes)
def _same(a, b):
    try: return bool(np.array_equal(a, b))
    except Exception: return False

class IMap(collsABC.Mapping):
    '''
    IMap(plan, afferents, values, checks) is the lazy, immutable mapping of a plan's afferents and
    efferents; efferents are calculated on request and cached. IMaps are made by calling a plan or
    by the set method of another IMap.
    '''
    def __init__(self, plan, afferents, values, checks):
        object.__setattr__(self, 'plan',      plan)
        object.__setattr__(self, 'afferents', ps.pmap(afferents))
        object.__setattr__(self, '_values',   values)
        for node in checks: node(self)
    def __setattr__(self, key, val):
        raise TypeError('IMap objects are immutable')
    def __delattr__(self, key):
        raise TypeError('IMap objects are immutable')
    def __len__(self):
        return len(self.afferents) + len(self.plan.producers)
    def __iter__(self):
        for k in six.iterkeys(self.afferents): yield k
        for k in six.iterkeys(self.plan.producers): yield k
    def __contains__(self, k):
        return k in self.afferents or k in self.plan.producers
    def __getitem__(self, k):
        if k in self.afferents: return self.afferents[k]
        node = self.plan.producers.get(k)
        if node is None: raise KeyError(k)
        if k not in self._values:
            # the cache is a persistent map, swapped in whole
            object.__setattr__(self, '_values', self._values.update(node(self)))
        return self._values[k]
    def __repr__(self):
        affs = ['%r: %r' % kv for kv in sorted(six.iteritems(self.afferents))]
        effs = ['%r: %s' % (k, '<cached>' if k in self._values else '<lazy>')
                for k in self.plan.efferents]
        return 'imap({' + ', '.join(affs + effs) + '})'
    def set(self, *args, **kwargs):
        '''
        m.set(maps..., key=val...) yields a copy of the IMap m in which the given afferents are
          replaced. Cached efferents that do not depend on them are carried over, and the checks
          that read them are rerun.
        '''
        changes = dict(merge(args, kwargs))
        if not changes: return self
        for k in changes:
            if k not in self.afferents:
                raise TypeError('The given key \'%s\' is not a parameter of the IMap object' % (k,))
        vals = self._values
        checks = set()
        for k in changes:
            for dep in self.plan.dependants[k]: vals = vals.discard(dep)
            checks.update(self.plan.triggers[k])
        return IMap(self.plan, self.afferents.update(changes), vals,
                    sorted(checks, key=lambda c: c.name))

####################################################################################################
# Identification functions for these types
def is_calc(arg):
    '''
    is_calc(x) yields True if x is a calculation node made by @calc and False otherwise.
    '''
    return isinstance(arg, Calc)
def is_plan(arg):
    '''
    is_plan(x) yields True if x is a calculation plan and False otherwise.
    '''
    return isinstance(arg, Plan)
def is_imap(arg):
    '''
    is_imap(x) yields True if x is an IMap object and False otherwise.
    '''
    return isinstance(arg, IMap)

####################################################################################################
# Creation functions for Calc, Plan, and IMap objects
def calc(*args):
    '''
    @calc decorates a function as a calculation node whose single output has the function's name.
    @calc(names...) names the outputs of the node; with more than one name, the function must yield
      a tuple of the values in order.
    @calc(None) declares a check: a node with no outputs that is run as soon as its parameters are
      set, and that validates them by raising.
    '''
    if len(args) == 1 and isinstance(args[0], types.FunctionType):
        return Calc(args[0], (args[0].__name__,), {})
    elif len(args) == 1 and args[0] is None:
        return lambda f: Calc(f, (), {})
    elif len(args) < 1:
        raise ValueError('calc should be used as a function decorator')
    elif not all(is_str(arg) for arg in args):
        raise ValueError('@calc(...) requires that all arguments be strings')
    return lambda f: Calc(f, args, {})
def plan(*args, **kwargs):
    '''
    plan(name1=calc1, name2=calc2...) yields a new calculation plan made from the named calc nodes.
    plan(arg1, arg2..., name1=calc1...) first merges the nodes of the given plans or dictionaries,
      left-to-right.
    plan(imap) yields the plan of the given IMap.
    '''
    if len(args) == 1 and len(kwargs) == 0 and is_imap(args[0]):
        return args[0].plan
    return Plan(dict(merge(tuple(a.nodes if is_plan(a) else a for a in args), kwargs)))
def imap(p, *args, **kwargs):
    '''
    imap(p, args...) yields the IMap of the plan p (or of plan(p) if p is a dictionary of nodes) for
    the given mappings and keyword arguments, merged left-to-right.
    '''
    p = p if is_plan(p) else plan(p)
    return p(merge(args, kwargs))
