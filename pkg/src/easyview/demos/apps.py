"""The bundled example programs.

Each builder returns a fresh :class:`Demo` with its own observables, so two
runs never share state. Demo code only builds views and touches
observables; it never sees a backend or a widget handle (the one
exception is the goodbye customizer, which is the point of that demo).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

from ..observable import Observable, obs_make, obs_map, obs_peek, obs_update
from ..view import View, make_view
from ..views import add1, button, counter, hpanel, sub1, tabs, text, vpanel, window
from .formula import eval_formula


@dataclass
class Demo:
    name: str
    view: View
    observables: dict[str, Observable] = field(default_factory=dict)


def updater(o: Observable) -> Callable[[Callable], object]:
    """The usual counter action: apply the proposed change to ``o``."""
    return lambda proc: obs_update(o, proc)


def counter_demo() -> Demo:
    count = obs_make(0)
    view = window(
        hpanel(
            button("-", lambda: obs_update(count, sub1)),
            text(obs_map(count, str)),
            button("+", lambda: obs_update(count, add1)),
        ),
        title="Counter",
    )
    return Demo("counter", view, {"count": count})


def counters_demo() -> Demo:
    c1 = obs_make(0)
    c2 = obs_make(5)
    view = window(counter(c1, updater(c1)), counter(c2, updater(c2)), title="Counters")
    return Demo("counters", view, {"c1": c1, "c2": c2})


def goodbye_demo() -> Demo:
    close = [lambda: None]

    def capture_close(widget, controls):
        close[0] = controls.close

    view = window(
        button("Click Me!", lambda: close[0]()),
        title="Goodbye World",
        customizer=capture_close,
    )
    return Demo("goodbye", view)


# -- tracker: a small monster tracker threading @env through its views


@dataclass(frozen=True)
class Monster:
    name: str
    hp_formula: str
    hp_current: int


@dataclass
class TrackerModel:
    env: Observable
    groups: dict[str, Observable]


INITIAL_ENV = {"L": 2, "C": 4}

INITIAL_GROUPS = {
    "Guards": [("Guard A", "2*L+1"), ("Guard B", "L*C+3"), ("Guard C", "(L+1)*4")],
    "Archers": [("Archer A", "C*2-1"), ("Archer B", "L+C"), ("Archer C", "10+L*L")],
}


def make_tracker_model(env: Mapping[str, int] = INITIAL_ENV) -> TrackerModel:
    env = dict(env)
    groups = {
        name: obs_make([Monster(m, f, eval_formula(f, env)) for m, f in members])
        for name, members in INITIAL_GROUPS.items()
    }
    return TrackerModel(obs_make(env), groups)


def hp_text(monster: Observable, env: Observable) -> View:
    """Label showing the monster's maximum hp formula evaluated against env."""

    def create(backend, parent):
        return backend.create_label(parent, str(eval_formula(obs_peek(monster).hp_formula, obs_peek(env))))

    def update(backend, widget, changed, value):
        if changed is env:
            formula, bindings = obs_peek(monster).hp_formula, value
        else:
            formula, bindings = value.hp_formula, obs_peek(env)
        backend.set_label(widget, str(eval_formula(formula, bindings)))

    return make_view([monster, env], create, update)


def monster_view(monster: Observable, env: Observable, action) -> View:
    return vpanel(
        text(obs_map(monster, lambda m: m.name)),
        hp_text(monster, env),
        counter(obs_map(monster, lambda m: m.hp_current), action),
    )


def monster_group_view(name: str, monsters: Observable, env: Observable) -> View:
    def view_for(monster: Observable) -> View:
        def change_hp(proc):
            target = obs_peek(monster).name
            obs_update(
                monsters,
                lambda ms: [replace(m, hp_current=proc(m.hp_current)) if m.name == target else m for m in ms],
            )

        return monster_view(monster, env, change_hp)

    return vpanel(text(name), tabs(monsters, view_for, label=lambda m: m.name))


def env_view(env: Observable, variable: str) -> View:
    def change(proc):
        obs_update(env, lambda e: {**e, variable: proc(e[variable])})

    return hpanel(text(variable), counter(obs_map(env, lambda e: e[variable]), change))


def tracker_view(model: TrackerModel) -> View:
    return window(
        vpanel(
            *(env_view(model.env, v) for v in sorted(obs_peek(model.env))),
            *(monster_group_view(name, ms, model.env) for name, ms in model.groups.items()),
        ),
        title="Tracker",
    )


def tracker_demo() -> Demo:
    model = make_tracker_model()
    names = {"env": model.env}
    names.update({name.lower(): ms for name, ms in model.groups.items()})
    return Demo("tracker", tracker_view(model), names)


DEMOS: dict[str, Callable[[], Demo]] = {
    "counter": counter_demo,
    "counters": counters_demo,
    "goodbye": goodbye_demo,
    "tracker": tracker_demo,
}
