# -*- coding: utf-8 -*-
"""
广播语义的有界执行，用作保护分析的检验器

配置由若干线程组成，每个线程的头部是绑定器、输出或 case。结构同余在生成线程时
立即应用：并行拆分、0 消去、最外层限制打开、复制按预算展开。复制副本中的限制名
按副本路径改名为 `name#path`。攻击者作为并行分量，可在已知名字（含其全部副本）
上以新鲜载荷广播。
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, TypeAlias

from core.logger import logger
from apps.calculus.ast import (
    Bind,
    Binder,
    Case,
    Const,
    Guard,
    Input,
    Nil,
    Output,
    Par,
    Process,
    Repl,
    Restrict,
    inputs,
)
from apps.analysis.solver import enumerate_attacks
from apps.analysis.translate import build_system

Env: TypeAlias = tuple[tuple[str, Optional[str]], ...]


@dataclass(frozen=True)
class Tau:
    def __str__(self) -> str:
        return "tau"


@dataclass(frozen=True)
class Broadcast:
    channel: str
    payload: str
    attacker: bool = False

    def __str__(self) -> str:
        return f"{self.channel}!{self.payload}"


StepLabel = Tau | Broadcast


@dataclass(frozen=True)
class Thread:
    """
    并行分量

    env 记录输入变量（None 表示 none）、项变量以及限制名的改名；
    received 为头部绑定器已记录的替换 [some(c)/x]。
    """
    path: str
    process: Process
    env: Env = ()
    received: tuple[tuple[str, str], ...] = ()

    @property
    def label(self) -> int:
        return self.process.label  # type: ignore[union-attr]


@dataclass(frozen=True)
class Configuration:
    threads: tuple[Thread, ...]
    knowledge: frozenset[str] = field(default_factory=frozenset)
    depth: int = 0

    def labels(self) -> set[int]:
        return {thread.label for thread in self.threads}


@dataclass(frozen=True)
class Verdict:
    """检验结论：pass、fail 或 vacuous（目标在界内不可达）"""
    status: Literal["pass", "fail", "vacuous"]
    target: int
    knowledge: frozenset[str]
    witness: tuple[str, ...] = ()
    attacker_channels: tuple[str, ...] = ()
    support: Optional[frozenset[str]] = None


def base_name(channel: str) -> str:
    """副本改名前的名字"""
    return channel.split("#", 1)[0]


def _extend(env: Env, updates: dict[str, Optional[str]]) -> Env:
    merged = dict(env)
    merged.update(updates)
    return tuple(sorted(merged.items(), key=lambda item: item[0]))


def _resolve(env: Env, name: str) -> str:
    return dict(env).get(f"n:{name}") or name


def _spread(path: str, p: Process, env: Env, unfold: int) -> list[Thread]:
    if isinstance(p, Nil):
        return []
    if isinstance(p, Par):
        return _spread(path + "0", p.left, env, unfold) + _spread(path + "1", p.right, env, unfold)
    if isinstance(p, Restrict):
        if "r" in path:
            env = _extend(env, {f"n:{p.name}": f"{p.name}#{path}"})
        return _spread(path, p.body, env, unfold)
    if isinstance(p, Repl):
        threads: list[Thread] = []
        for copy in range(unfold):
            threads.extend(_spread(f"{path}r{copy}", p.body, env, unfold))
        return threads
    return [Thread(path, p, env)]


def _ordered(threads: Iterable[Thread]) -> tuple[Thread, ...]:
    return tuple(sorted(threads, key=lambda thread: thread.path))


def initial_configuration(p: Process, knowledge: Iterable[str] = (), unfold_budget: int = 2) -> Configuration:
    """打开最外层限制并展开复制后的初始配置"""
    return Configuration(_ordered(_spread("", p, (), unfold_budget)), frozenset(knowledge), 0)


def _satisfied(b: Binder, received: dict[str, str]) -> bool:
    if isinstance(b, Input):
        return b.var in received
    results = [_satisfied(sub, received) for sub in b.subs]
    return all(results) if b.guard is Guard.FORALL else any(results)


def _listening(thread: Thread) -> list[str]:
    if not isinstance(thread.process, Bind):
        return []
    received = dict(thread.received)
    return [
        _resolve(thread.env, leaf.channel)
        for leaf in inputs(thread.process.binder)
        if leaf.var not in received
    ]


def _deliver(threads: Iterable[Thread], channel: str, payload: str, unfold: int) -> list[Thread]:
    """把一次广播同时交给所有正在该信道上监听的绑定器"""
    result: list[Thread] = []
    for thread in threads:
        process = thread.process
        if not isinstance(process, Bind):
            result.append(thread)
            continue
        received = dict(thread.received)
        changed = False
        for leaf in inputs(process.binder):
            if leaf.var not in received and _resolve(thread.env, leaf.channel) == channel:
                received[leaf.var] = payload
                changed = True
        if not changed:
            result.append(thread)
        elif _satisfied(process.binder, received):
            bindings: dict[str, Optional[str]] = {
                f"x:{leaf.var}": received.get(leaf.var) for leaf in inputs(process.binder)
            }
            result.extend(_spread(thread.path, process.body, _extend(thread.env, bindings), unfold))
        else:
            result.append(Thread(thread.path, process, thread.env, tuple(sorted(received.items()))))
    return result


def successors(
    c: Configuration,
    unfold_budget: int = 2,
    payload: str = "_atk",
) -> list[tuple[StepLabel, Configuration]]:
    """
    单步后继及其迁移标签

    有待执行的 case 时只允许内部步：广播只能越过复制、输出前缀或绑定器分量。
    """
    threads = c.threads
    depth = c.depth + 1
    result: list[tuple[StepLabel, Configuration]] = []

    for index, thread in enumerate(threads):
        process = thread.process
        if not isinstance(process, Case):
            continue
        value = dict(thread.env).get(f"x:{process.scrutinee}")
        if value is not None:
            env = _extend(thread.env, {f"y:{process.yvar}": value})
            continued = _spread(thread.path, process.then, env, unfold_budget)
        else:
            continued = _spread(thread.path, process.else_, thread.env, unfold_budget)
        rest = threads[:index] + threads[index + 1:]
        result.append((Tau(), Configuration(_ordered(list(rest) + continued), c.knowledge, depth)))
    if result:
        return result

    for index, thread in enumerate(threads):
        process = thread.process
        if not isinstance(process, Output):
            continue
        channel = _resolve(thread.env, process.channel)
        if isinstance(process.payload, Const):
            value = _resolve(thread.env, process.payload.name)
        else:
            value = dict(thread.env)[f"y:{process.payload.name}"] or ""
        rest = threads[:index] + threads[index + 1:]
        delivered = _deliver(rest, channel, value, unfold_budget)
        continued = _spread(thread.path, process.body, thread.env, unfold_budget)
        result.append(
            (Broadcast(channel, value), Configuration(_ordered(delivered + continued), c.knowledge, depth))
        )

    attack_channels = sorted({
        channel
        for thread in threads
        for channel in _listening(thread)
        if base_name(channel) in c.knowledge
    })
    for channel in attack_channels:
        delivered = _deliver(threads, channel, payload, unfold_budget)
        result.append(
            (Broadcast(channel, payload, attacker=True), Configuration(_ordered(delivered), c.knowledge, depth))
        )
    return result


def step(c: Configuration, unfold_budget: int = 2) -> set[Configuration]:
    """全部单步后继"""
    return {successor for _, successor in successors(c, unfold_budget)}


def explore(
    p: Process,
    knowledge: Iterable[str],
    depth_bound: int,
    unfold_budget: int,
    payload: str = "_atk",
) -> dict[int, tuple[StepLabel, ...]]:
    """
    广度优先搜索界内可达的标签

    Returns:
        dict[int, tuple[StepLabel, ...]]: 每个可达标签及一条最短见证迁移序列
    """
    start = initial_configuration(p, knowledge, unfold_budget)
    reached: dict[int, tuple[StepLabel, ...]] = {label: () for label in start.labels()}
    seen = {start.threads}
    frontier: deque[tuple[Configuration, tuple[StepLabel, ...]]] = deque([(start, ())])
    while frontier:
        config, trace = frontier.popleft()
        if config.depth >= depth_bound:
            continue
        for label_, successor in successors(config, unfold_budget, payload):
            if successor.threads in seen:
                continue
            seen.add(successor.threads)
            extended = trace + (label_,)
            for label in successor.labels():
                reached.setdefault(label, extended)
            frontier.append((successor, extended))
    logger.debug(f"有界搜索完成：{len(seen)} 个状态，可达标签 {sorted(reached)}")
    return reached


def reaches(
    p: Process,
    target: int,
    knowledge: Iterable[str],
    depth_bound: int = 12,
    unfold_budget: int = 2,
) -> bool:
    """在最难攻击者 H[knowledge] 之下，界内能否到达 target"""
    return target in explore(p, knowledge, depth_bound, unfold_budget)


def check_underapprox(
    p: Process,
    target: int,
    knowledge: Iterable[str],
    depth_bound: int = 12,
    unfold_budget: int = 2,
    payload: str = "_atk",
) -> Verdict:
    """
    检验分析的欠近似性质：可达时必须存在包含于知识的攻击

    Returns:
        Verdict: 不可达时为 vacuous
    """
    known = frozenset(knowledge)
    reached = explore(p, known, depth_bound, unfold_budget, payload)
    if target not in reached:
        return Verdict("vacuous", target, known)
    trace = reached[target]
    witness = tuple(str(label) for label in trace)
    attacker_channels = tuple(
        label.channel for label in trace if isinstance(label, Broadcast) and label.attacker
    )
    support = next(
        (found for _, found in enumerate_attacks(build_system(p, target), minimal_only=True) if found <= known),
        None,
    )
    status: Literal["pass", "fail"] = "pass" if support is not None else "fail"
    if status == "fail":
        logger.warning(f"标签 {target} 在知识 {sorted(known)} 下可达，但分析未给出对应攻击")
    return Verdict(status, target, known, witness, attacker_channels, support)


__all__ = [
    "Tau",
    "Broadcast",
    "StepLabel",
    "Thread",
    "Configuration",
    "Verdict",
    "base_name",
    "initial_configuration",
    "successors",
    "step",
    "explore",
    "reaches",
    "check_underapprox",
]
