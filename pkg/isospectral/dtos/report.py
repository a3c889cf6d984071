"""Data Transfer Objects for measure and estimation endpoints."""

from litestar.dto import DataclassDTO, DTOConfig

from isospectral.models import BoundReport, FisherResult, MeasureReport, PhotonStatistics, WavefunctionSample


class MeasureReportDTO(DataclassDTO[MeasureReport]):
    """DTO for reading one measure report."""

    config = DTOConfig()


class PhotonStatisticsDTO(DataclassDTO[PhotonStatistics]):
    """DTO for reading a photon-number distribution."""

    config = DTOConfig()


class FisherResultDTO(DataclassDTO[FisherResult]):
    """DTO for reading Fisher information values."""

    config = DTOConfig()


class BoundReportDTO(DataclassDTO[BoundReport]):
    """DTO for reading Cramer-Rao bounds."""

    config = DTOConfig()


class WavefunctionSampleDTO(DataclassDTO[WavefunctionSample]):
    """DTO for reading one eigenfunction amplitude."""

    config = DTOConfig()
