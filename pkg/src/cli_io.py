"""
文档格式与命令行入口
JSON 报告输出到标准输出，日志输出到标准错误
"""

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from src.config import get_config, reload_config
from src.cones import Cone, Fan
from src.errors import MalformedDocument, MalformedInput, ToricError
from src.lattice_core import LinearMap, Vector, content, primitive
from src.logger import LogLevel, get_logger, setup_logging
from src.report_models import CommandReport
from src.variety import ToricTriple, build_triple

logger = get_logger("cli")

_INTEGER = re.compile(r"-?\d+")

CHECKS = ["cartier", "bpf", "ample", "veryample", "principal", "sections", "polytope"]


# ---------------------------------------------------------------------------
# 文档
# ---------------------------------------------------------------------------

@dataclass
class VarietyDocument:
    """文档的结构化形式：rank、锥列表（id 与射线）、极大锥 id → 生成元"""
    rank: int
    cones: List[Tuple[str, List[Vector]]] = field(default_factory=list)
    semigroups: Dict[str, List[Vector]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rank": self.rank,
            "cones": [{"id": ident, "rays": [list(r) for r in rays]} for ident, rays in self.cones],
            "semigroups": {k: [list(g) for g in v] for k, v in self.semigroups.items()},
        }


def _parse_int(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise MalformedDocument(f"expected an integer at {path}, got a boolean", path=path)
    if isinstance(value, int):
        return value
    if isinstance(value, str) and _INTEGER.fullmatch(value):
        return int(value)
    raise MalformedDocument(f"expected an integer at {path}", path=path)


def _parse_vector(value: Any, length: Optional[int], path: str) -> Vector:
    if not isinstance(value, list):
        raise MalformedDocument(f"expected an integer array at {path}", path=path)
    vec = tuple(_parse_int(x, f"{path}[{i}]") for i, x in enumerate(value))
    if length is not None and len(vec) != length:
        raise MalformedDocument(
            f"expected {length} coordinates at {path}, got {len(vec)}", path=path
        )
    return vec


def _parse_vectors(value: Any, length: Optional[int], path: str) -> List[Vector]:
    if not isinstance(value, list):
        raise MalformedDocument(f"expected an array of integer arrays at {path}", path=path)
    return [_parse_vector(v, length, f"{path}[{i}]") for i, v in enumerate(value)]


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDocument(
            f"invalid JSON in {source}: {e.msg}", line=e.lineno, column=e.colno
        ) from e


def parse_document(text: str, source: str = "<input>") -> VarietyDocument:
    """
    解析并校验文档结构

    Raises:
        MalformedDocument: 语法错误（带行列号）或结构错误（带 JSON 路径）
    """
    data = _load_json(text, source)
    if not isinstance(data, dict):
        raise MalformedDocument("document must be a JSON object", path="$")
    unknown = sorted(set(data) - {"rank", "cones", "semigroups"})
    if unknown:
        raise MalformedDocument(f"unknown keys {unknown}", path=f"$.{unknown[0]}")
    for key in ("rank", "cones", "semigroups"):
        if key not in data:
            raise MalformedDocument(f"missing key {key!r}", path=f"$.{key}")

    rank = _parse_int(data["rank"], "$.rank")
    if rank < 0:
        raise MalformedDocument("rank must be non-negative", path="$.rank")

    if not isinstance(data["cones"], list) or not data["cones"]:
        raise MalformedDocument("cones must be a non-empty array", path="$.cones")
    cones: List[Tuple[str, List[Vector]]] = []
    seen = set()
    for i, entry in enumerate(data["cones"]):
        path = f"$.cones[{i}]"
        if not isinstance(entry, dict) or set(entry) != {"id", "rays"}:
            raise MalformedDocument("cone entries need exactly the keys 'id' and 'rays'", path=path)
        ident = entry["id"]
        if not isinstance(ident, str) or not ident:
            raise MalformedDocument("cone id must be a non-empty string", path=f"{path}.id")
        if ident in seen:
            raise MalformedDocument(f"duplicate cone id {ident!r}", path=f"{path}.id")
        seen.add(ident)
        rays = []
        for j, ray in enumerate(_parse_vectors(entry["rays"], rank, f"{path}.rays")):
            if not any(ray):
                raise MalformedDocument("rays must be nonzero", path=f"{path}.rays[{j}]")
            if content(ray) != 1:
                logger.warning(
                    "Non-primitive ray normalized",
                    context={"source": source, "cone": ident, "ray": list(ray)},
                )
                ray = primitive(ray)
            rays.append(ray)
        cones.append((ident, rays))

    if not isinstance(data["semigroups"], dict):
        raise MalformedDocument("semigroups must be an object", path="$.semigroups")
    semigroups = {}
    for ident, gens in data["semigroups"].items():
        if ident not in seen:
            raise MalformedDocument(f"semigroup for unknown cone {ident!r}", path=f"$.semigroups.{ident}")
        semigroups[ident] = _parse_vectors(gens, rank, f"$.semigroups.{ident}")
    return VarietyDocument(rank, cones, semigroups)


def document_to_triple(document: VarietyDocument) -> ToricTriple:
    """文档 → 三元组；极大锥缺少半群时报错"""
    cones = {ident: Cone.from_rays(rays, document.rank) for ident, rays in document.cones}
    fan = Fan.from_maximal(list(cones.values()), document.rank)

    cone_ids: Dict[Cone, str] = {}
    for ident, cone in cones.items():
        cone_ids.setdefault(cone, ident)
    for ident, cone in cones.items():
        if cone in fan.maximal_cones and ident not in document.semigroups:
            raise MalformedDocument(
                f"maximal cone {ident!r} has no semigroup", path=f"$.semigroups.{ident}"
            )
    charts = [(cones[ident], gens) for ident, gens in document.semigroups.items()]
    return build_triple(document.rank, charts, cone_ids)


def parse_variety(text: str, source: str = "<input>") -> ToricTriple:
    return document_to_triple(parse_document(text, source))


def variety_to_document(variety: ToricTriple) -> VarietyDocument:
    cones = []
    semigroups = {}
    for sigma in variety.maximal_cones:
        ident = variety.cone_label(sigma)
        cones.append((ident, list(sigma.rays)))
        semigroups[ident] = list(variety.chart(sigma).generators)
    return VarietyDocument(variety.rank, cones, semigroups)


def to_json_safe(value: Any, bits: Optional[int] = None) -> Any:
    """超过安全位数的整数写成十进制字符串"""
    if bits is None:
        bits = get_config().get_output_config()['safe_integer_bits']
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= 2 ** bits else value
    if isinstance(value, dict):
        return {str(k): to_json_safe(v, bits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_safe(v, bits) for v in value]
    return value


def dumps(value: Any) -> str:
    indent = get_config().get_output_config()['indent']
    return json.dumps(to_json_safe(value), sort_keys=True, indent=indent, ensure_ascii=False)


def serialize_variety(variety: ToricTriple) -> str:
    """规范文档文本"""
    return dumps(variety_to_document(variety).to_dict())


# ---------------------------------------------------------------------------
# 命令
# ---------------------------------------------------------------------------

def _read_variety(path: str) -> ToricTriple:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise MalformedDocument(f"cannot read {path}: {e.strerror}", path=path) from e
    return parse_variety(text, source=path)


def _json_option(text: str, option: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDocument(
            f"invalid JSON in {option}: {e.msg}", path=option, line=e.lineno, column=e.colno
        ) from e


def _matrix_option(text: str, option: str, columns: int) -> LinearMap:
    rows = _parse_vectors(_json_option(text, option), columns, option)
    return LinearMap.from_rows(rows, columns)


def cmd_validate(args) -> Dict[str, Any]:
    from src.variety import orbits, smooth_locus

    variety = _read_variety(args.document)
    smooth = {c for c in smooth_locus(variety)}
    return {
        "rank": variety.rank,
        "maximal_cones": [variety.cone_label(s) for s in variety.maximal_cones],
        "cone_count": len(variety.fan.cones),
        "orbits": [o.to_dict() for o in orbits(variety)],
        "smooth": len(smooth) == len(variety.fan.cones),
    }


def cmd_normalize(args) -> Dict[str, Any]:
    from src.variety import normalization

    return {"document": variety_to_document(normalization(_read_variety(args.document))).to_dict()}


def cmd_orbits(args) -> Dict[str, Any]:
    from src.variety import orbits

    return {"orbits": [o.to_dict() for o in orbits(_read_variety(args.document))]}


def cmd_orbit_closure(args) -> Dict[str, Any]:
    from src.variety import orbit_closure

    variety = _read_variety(args.document)
    tau = variety.find_cone(args.cone)
    closure = orbit_closure(variety, tau)
    return {"cone": variety.cone_label(tau), "document": variety_to_document(closure).to_dict()}


def cmd_blowup(args) -> Dict[str, Any]:
    from src.blowup import blowup_affine, make_ideal, newton_polyhedron

    variety = _read_variety(args.document)
    sigma = variety.find_cone(args.chart)
    chart = variety.chart(sigma)
    ideal = make_ideal(chart, _parse_vectors(_json_option(args.ideal, "--ideal"), variety.rank, "--ideal"))
    result: Dict[str, Any] = {
        "chart": variety.cone_label(sigma),
        "document": variety_to_document(blowup_affine(chart, ideal)).to_dict(),
    }
    if chart.is_pointed:
        result["newton_polyhedron"] = newton_polyhedron(chart, ideal).to_dict()
    return result


def cmd_nash(args) -> Dict[str, Any]:
    from src.nash import nash_iterate

    if args.steps is not None and args.steps < 0:
        raise MalformedDocument("--steps must be a non-negative integer", path="--steps")
    report = nash_iterate(_read_variety(args.document), args.steps, args.normalize)
    result = report.to_dict()
    result["final_chart_count"] = len(report.final_triple.maximal_cones)
    result["document"] = variety_to_document(report.final_triple).to_dict()
    return result


def cmd_smooth(args) -> Dict[str, Any]:
    from src.nash import is_smooth_chart
    from src.variety import smooth_locus

    variety = _read_variety(args.document)
    return {
        "smooth_locus": [variety.cone_label(c) for c in smooth_locus(variety)],
        "charts": [
            {"cone": variety.cone_label(s), "smooth": is_smooth_chart(variety.chart(s))}
            for s in variety.maximal_cones
        ],
    }


def cmd_divisor(args) -> Dict[str, Any]:
    from src import divisors

    variety = _read_variety(args.document)
    raw = _json_option(args.data, "--data")
    if not isinstance(raw, dict):
        raise MalformedDocument("--data must map cone ids to lattice points", path="--data")
    values = {
        variety.find_cone(ident): _parse_vector(m, variety.rank, f"--data.{ident}")
        for ident, m in raw.items()
    }
    result: Dict[str, Any] = {"check": args.check}
    if args.check == "cartier":
        result.update(divisors.check_cartier(variety, values).to_dict())
        return result

    divisor = divisors.make_cartier(variety, values)
    if args.check == "polytope":
        result["polytope"] = divisors.divisor_polytope(divisor).to_dict()
    elif args.check == "sections":
        result["sections"] = [list(m) for m in divisors.global_sections(divisor)]
    elif args.check == "principal":
        witness = divisors.principal_witness(divisor)
        result["value"] = witness is not None
        result["witness"] = list(witness) if witness is not None else None
    else:
        predicate = {
            "bpf": divisors.is_basepoint_free,
            "ample": divisors.is_ample,
            "veryample": divisors.is_very_ample,
        }[args.check]
        result["value"] = predicate(divisor)
    return result


def cmd_gkz(args) -> Dict[str, Any]:
    from src.divisors import gkz_triple

    raw = _json_option(args.points, "--points")
    points = _parse_vectors(raw, None, "--points")
    construction = gkz_triple(points)
    return {
        "points": [list(p) for p in construction.points],
        "document": variety_to_document(construction.triple).to_dict(),
        "cartier": construction.divisor.to_dict(),
        "sections": [list(m) for m in construction.sections],
    }


def cmd_limit(args) -> Dict[str, Any]:
    from src.variety import limit_exists

    variety = _read_variety(args.document)
    vector = _parse_vector(_json_option(args.vector, "--vector"), variety.rank, "--vector")
    return {"vector": list(vector), "limit_exists": limit_exists(variety, vector)}


def cmd_morphism(args) -> Dict[str, Any]:
    from src.semigroups import face_semigroup
    from src.variety import check_fan_map, lifts_to_normalization

    source = _read_variety(args.document)
    target = _read_variety(args.target)
    if args.lift_cone:
        tau = target.find_cone(args.lift_cone)
        k = face_semigroup(target.semigroup_at(tau), tau).orbit_lattice.rank
        pullback = _matrix_option(args.matrix, "--matrix", k)
        lift = lifts_to_normalization(target, tau, pullback)
        return {"cone": target.cone_label(tau), "lift": lift.to_dict()}
    linear_map = _matrix_option(args.matrix, "--matrix", source.rank)
    return {"map": check_fan_map(linear_map, source, target).to_dict()}


COMMANDS = {
    "validate": cmd_validate,
    "normalize": cmd_normalize,
    "orbits": cmd_orbits,
    "orbit-closure": cmd_orbit_closure,
    "blowup": cmd_blowup,
    "nash": cmd_nash,
    "smooth": cmd_smooth,
    "divisor": cmd_divisor,
    "gkz": cmd_gkz,
    "limit": cmd_limit,
    "morphism": cmd_morphism,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nashtoric",
        description="一般环面簇的精确计算：校验、轨道、爆破、Nash 变换与除子",
    )
    parser.add_argument('--config', '-c', help='配置文件路径')
    parser.add_argument('--threads', type=int, help='线程池宽度（覆盖 resources.max_workers）')
    parser.add_argument(
        '--log-level',
        choices=[level.value for level in LogLevel],
        help='日志级别（覆盖 logging.level）',
    )
    parser.add_argument('--emit-examples', metavar='DIR', help='把内置示例写入目录')

    sub = parser.add_subparsers(dest='command')

    def with_document(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument('document', help='三元组文档 (JSON)')
        return p

    with_document('validate', '校验三元组并列出轨道')
    with_document('normalize', '正规化')
    with_document('orbits', '列出轨道与指数')
    with_document('orbit-closure', '轨道闭包').add_argument('--cone', required=True, help='锥 id')

    p = with_document('blowup', '单个图卡上单项式理想的爆破')
    p.add_argument('--chart', required=True, help='极大锥 id')
    p.add_argument('--ideal', required=True, help="指数列表，例如 '[[1,0],[0,1]]'")

    p = with_document('nash', '迭代 Nash 变换')
    p.add_argument('--steps', type=int, help='最大步数（默认 limits.nash_max_steps）')
    p.add_argument('--normalize', action='store_true', help='每步之后正规化')

    with_document('smooth', '光滑点集与图卡光滑性')

    p = with_document('divisor', 'Cartier 除子判定')
    p.add_argument('--data', required=True, help="锥 id → m_σ，例如 '{\"sigma\": [0,0]}'")
    p.add_argument('--check', required=True, choices=CHECKS)

    p = sub.add_parser('gkz', help='由点集构造 GKZ 三元组')
    p.add_argument('--points', required=True, help="点集，例如 '[[0],[2],[3]]'")

    p = with_document('limit', '单参数子群极限是否存在')
    p.add_argument('--vector', required=True, help="N 中的向量，例如 '[1,1]'")

    p = with_document('morphism', '带半群的扇映射与正规化提升')
    p.add_argument('--matrix', required=True, help='φ_* 的矩阵（行）；配合 --lift-cone 时为 φ*')
    p.add_argument('--target', required=True, help='目标三元组文档')
    p.add_argument('--lift-cone', help='在目标锥上判定能否提升到正规化')

    return parser


def _configure(args) -> None:
    config = reload_config(args.config, required=True) if args.config else get_config()
    if args.threads is not None:
        config.set('resources.max_workers', args.threads)
    logging_config = config.get_logging_config()
    level = args.log_level or logging_config['level']
    setup_logging(
        level=LogLevel(level) if level in LogLevel.__members__ else LogLevel.WARNING,
        log_dir=logging_config['log_dir'],
        log_file=logging_config['log_file'],
    )


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """执行命令，报告写入 out，返回退出码"""
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command or ("emit-examples" if args.emit_examples else None)
    if command is None:
        parser.print_help(sys.stderr)
        return 2

    report = CommandReport(command)
    start = time.monotonic()
    try:
        _configure(args)
        logger.log_command_start(command, getattr(args, 'document', None))
        if args.emit_examples:
            from src.corpus import emit_examples

            written = [str(p) for p in emit_examples(args.emit_examples)]
            if not args.command:
                report.result = {"written": written}
        if args.command:
            report.result = COMMANDS[args.command](args)
        exit_code = 0
    except ToricError as e:
        logger.log_validation_failure(e, {"command": command})
        report.set_error(e.to_dict())
        exit_code = e.exit_code
    except FileNotFoundError as e:
        report.set_error(MalformedInput(str(e)).to_dict())
        exit_code = MalformedInput.exit_code

    logger.log_command_complete(command, time.monotonic() - start, report.status)
    out.write(dumps(report.to_dict()) + "\n")
    return exit_code


def main() -> None:
    sys.exit(run())


if __name__ == '__main__':
    main()
