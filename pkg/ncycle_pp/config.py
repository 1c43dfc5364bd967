from pydantic import Field
from pydantic_settings import BaseSettings
import os
from dotenv import load_dotenv

# 加载 .env 文件
load_dotenv()

class SearchConfig(BaseSettings):
    """搜索与验证配置类"""
    table_limit: int = Field(
        default_factory=lambda: int(os.getenv("NCYCLE_TABLE_LIMIT", str(2 ** 20))),
        description="建立对数表并运行完整 oracle 的最大域阶 q"
    )
    budget: int = Field(
        default_factory=lambda: int(os.getenv("NCYCLE_BUDGET", str(10 ** 8))),
        description="搜索允许的最大候选评估次数"
    )
    workers: int = Field(
        default_factory=lambda: int(os.getenv("NCYCLE_WORKERS", "1")),
        description="扫描与建表使用的工作线程数"
    )
    chunk_size: int = Field(
        default_factory=lambda: int(os.getenv("NCYCLE_CHUNK_SIZE", str(2 ** 16))),
        description="to_table 分块求值的块大小"
    )
    log_level: str = Field(
        default_factory=lambda: os.getenv("NCYCLE_LOG_LEVEL", "INFO"),
        description="日志级别"
    )
    output_format: str = Field(
        default_factory=lambda: os.getenv("NCYCLE_FORMAT", "text"),
        description="输出格式 (text, jsonl)"
    )

    # 族名称到模块的映射，供 CLI 帮助信息使用
    family_names: dict = Field(
        default_factory=lambda: {
            "char3-quad": "high_index",
            "even-q-tri": "high_index",
            "v-tri": "high_index",
            "idx2-binomial": "low_index",
            "idx3-trinomial": "low_index",
            "lift-char3": "lifted",
            "lift-even-q": "lifted",
        },
        description="CLI 族名称到实现模块的映射"
    )

# 创建全局配置实例
config = SearchConfig()
