import argparse
import sys
from typing import Dict, List, Literal, Optional, TextIO, Tuple

from loguru import logger
from pydantic import BaseModel, Field

from ncycle_pp.config import config
from ncycle_pp.errors import (BudgetExceededError, FieldError, NCycleError, NotBijectiveError, ParseError,
                              PreconditionError)
from ncycle_pp.field import FieldCtx, parse_field
from ncycle_pp.planner import FamilyPlanner
from ncycle_pp.records import ResultRecord, SummaryRecord, render
from ncycle_pp.search import run_construct, run_cycles, run_family, run_info, run_search, run_verify

# JobSpec 字段 -> 命令行参数，顺序即 to_argv 的输出顺序
_FLAGS = (
    ("field", "--field"), ("modulus", "--modulus"), ("poly", "--poly"), ("n", "--n"),
    ("family", "--family"), ("ell", "--ell"), ("r_range", "--r-range"), ("sigma", "--sigma"),
    ("mvec", "--mvec"), ("r", "--r"), ("budget", "--budget"), ("workers", "--workers"),
    ("output_format", "--format"), ("log_level", "--log-level"), ("output", "--output"),
)


def setup_logging(level: str = "INFO"):
    """配置日志"""
    logger.remove()
    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        level=level.upper()
    )


class JobSpec(BaseModel):
    """一次 CLI 调用；与命令行参数可以互相转换"""
    command: Literal["verify", "cycles", "construct", "family", "search", "info"]
    field: Optional[str] = None
    modulus: Optional[str] = None
    poly: Optional[str] = None
    n: Optional[int] = None
    family: Optional[str] = None
    params: Dict[str, str] = Field(default_factory=dict)
    ell: Optional[int] = None
    r_range: Optional[str] = None
    sigma: Optional[str] = None
    mvec: Optional[str] = None
    r: Optional[int] = None
    budget: Optional[int] = None
    workers: Optional[int] = None
    output_format: Optional[Literal["text", "jsonl"]] = None
    log_level: Optional[str] = None
    output: Optional[str] = None

    def to_argv(self) -> List[str]:
        argv = [self.command]
        for name, flag in _FLAGS:
            value = getattr(self, name)
            if value is not None:
                argv += [flag, str(value)]
        for key in sorted(self.params):
            argv += ["--param", f"{key}={self.params[key]}"]
        return argv

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "JobSpec":
        values = {k: v for k, v in vars(args).items() if k in cls.model_fields and v is not None}
        values["params"] = dict(args.params or []) if hasattr(args, "params") else {}
        return cls(**values)

    @classmethod
    def from_argv(cls, argv: List[str]) -> "JobSpec":
        return cls.from_namespace(build_parser().parse_args(argv))

    def parsed_r_range(self) -> Optional[Tuple[int, int]]:
        if self.r_range is None:
            return None
        lo, sep, hi = self.r_range.partition("..")
        try:
            if not sep:
                raise ValueError
            return int(lo), int(hi)
        except ValueError:
            raise ParseError(f"bad r range {self.r_range!r} (expected A..B)") from None


class Sink:
    """所有记录按产生顺序写到同一个输出"""
    def __init__(self, fmt: str, stream: TextIO):
        self.fmt = fmt
        self.stream = stream

    def emit(self, record: BaseModel) -> None:
        self.stream.write(render(record, self.fmt) + "\n")
        self.stream.flush()


def _param(text: str) -> Tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected k=v, got {text!r}")
    return key.strip(), value.strip()


def _field(job: JobSpec) -> FieldCtx:
    if not job.field:
        raise ParseError(f"{job.command} needs --field")
    return parse_field(job.field, job.modulus)


def _workers(job: JobSpec) -> int:
    return job.workers or config.workers


def _require(job: JobSpec, *names: str) -> None:
    missing = [name for name in names if getattr(job, name) is None]
    if missing:
        raise ParseError(f"{job.command} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _exit_for(record: ResultRecord) -> int:
    return 0 if record.passed else 1


def cmd_verify(job: JobSpec, sink: Sink) -> int:
    _require(job, "poly", "n")
    record = run_verify(_field(job), job.poly, job.n, workers=_workers(job))
    sink.emit(record)
    return _exit_for(record)


def cmd_cycles(job: JobSpec, sink: Sink) -> int:
    _require(job, "poly")
    records = run_cycles(_field(job), job.poly, job.n, workers=_workers(job))
    for record in records:
        sink.emit(record)
    return _exit_for(records[0])


def cmd_construct(job: JobSpec, sink: Sink) -> int:
    _require(job, "sigma", "n")
    records = run_construct(_field(job), job.sigma, job.mvec, job.r or 1, job.n, workers=_workers(job))
    for record in records:
        sink.emit(record)
    return _exit_for(records[0])


def cmd_family(job: JobSpec, sink: Sink) -> int:
    _require(job, "family")
    records = run_family(FamilyPlanner(), job.family, job.params, workers=_workers(job))
    for record in records:
        sink.emit(record)
    return _exit_for(records[0])


def cmd_search(job: JobSpec, sink: Sink) -> int:
    _require(job, "ell", "n")
    hits = 0
    try:
        for record in run_search(_field(job), job.ell, job.n, job.parsed_r_range(),
                                 budget=job.budget, workers=_workers(job)):
            sink.emit(record)
            if isinstance(record, SummaryRecord):
                hits = record.hits
    except BudgetExceededError as e:
        logger.warning(f"{e.msg}; {e.hits} hit(s) emitted, results incomplete")
        return 3
    logger.info(f"search finished with {hits} hit(s)")
    return 0


def cmd_info(job: JobSpec, sink: Sink) -> int:
    sink.emit(run_info(_field(job)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="域 p^m，例如 2^12")
    common.add_argument("--modulus", help="模多项式系数 c0,c1,...,1（低次在前）")
    common.add_argument("--format", dest="output_format", choices=["text", "jsonl"],
                        help=f"输出格式 (默认: {config.output_format})")
    common.add_argument("--workers", type=int, help=f"工作线程数 (默认: {config.workers})")
    common.add_argument("--log-level", dest="log_level", help=f"日志级别 (默认: {config.log_level})")
    common.add_argument("--output", help="把记录写入文件而不是标准输出")

    parser = argparse.ArgumentParser(prog="ncycle-pp", description="n-循环置换多项式的验证、构造与搜索")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="判据 + oracle 验证一个多项式")
    p.add_argument("--poly", help='多项式文本，例如 "x^2458 + x^1639 + x"')
    p.add_argument("--n", type=int, help="目标循环阶")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cycles", parents=[common], help="循环结构与最小阶")
    p.add_argument("--poly")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("construct", parents=[common], help="由 (sigma, mvec) 构造 x^r h(x^s)")
    p.add_argument("--sigma", help="μ_ℓ 上的目标排列，例如 1,2,0")
    p.add_argument("--mvec", help="整数向量，例如 0,1,0（默认全零）")
    p.add_argument("--r", type=int, help="指数 r (默认: 1)")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("family", parents=[common], help="构造并验证一个已知族的实例")
    p.add_argument("--family", choices=sorted(config.family_names))
    p.add_argument("--param", dest="params", type=_param, action="append", help="族参数 k=v，可重复")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("search", parents=[common], help="穷举 (r, h) 搜索 n-循环置换")
    p.add_argument("--ell", type=int, help="指标 ℓ，须整除 q-1")
    p.add_argument("--n", type=int)
    p.add_argument("--r-range", dest="r_range", help="r 的范围 A..B（默认 1..q-1）")
    p.add_argument("--budget", type=int, help=f"候选数上限 (默认: {config.budget})")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("info", parents=[common], help="域参数：模多项式、本原元、q-1 的分解")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    job = JobSpec.from_namespace(args)
    setup_logging(job.log_level or config.log_level)

    stream = sys.stdout
    try:
        if job.output:
            stream = open(job.output, "w", encoding="utf-8")
        return args.func(job, Sink(job.output_format or config.output_format, stream))
    except (ParseError, FieldError) as e:
        logger.error(f"输入错误: {e.msg}")
        return 2
    except PreconditionError as e:
        condition = f" [{e.condition}]" if e.condition else ""
        logger.error(f"前提条件不成立{condition}: {e.msg}")
        return 1
    except NotBijectiveError as e:
        logger.error(e.msg)
        return 1
    except NCycleError as e:
        logger.error(f"程序运行出错: {e.msg}")
        return 1
    except KeyboardInterrupt:
        logger.warning("检测到中断信号，正在退出...")
        return 130
    except OSError as e:
        logger.error(f"无法写入输出: {e}")
        return 2
    except Exception as e:
        logger.error(f"程序运行出错: {str(e)}")
        return 1
    finally:
        if stream is not sys.stdout:
            stream.close()


if __name__ == "__main__":
    sys.exit(main())
