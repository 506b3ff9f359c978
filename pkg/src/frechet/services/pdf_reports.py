"""PDF report generation for Frechet Polytope."""

from datetime import datetime
from pathlib import Path
from typing import Sequence

from reportlab.lib import colors
from reportlab.lib.pagesizes import A4, landscape
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import mm
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from frechet.models.entities import FrechetClass, Pmf, bits_string
from frechet.services.convex_order import sum_pmf
from frechet.services.ideal import classify_pmf
from frechet.utils.linalg import format_rat


class ReportGenerator:
    """Generates PDF tables for vertex catalogs and pmf reports."""

    def __init__(self):
        self.styles = getSampleStyleSheet()

        # Custom styles
        self.styles.add(
            ParagraphStyle(
                name="ReportTitle",
                parent=self.styles["Heading1"],
                fontSize=18,
                spaceAfter=12,
            )
        )
        self.styles.add(
            ParagraphStyle(
                name="ReportSubtitle",
                parent=self.styles["Normal"],
                fontSize=10,
                textColor=colors.black,
                spaceAfter=20,
            )
        )

    def _class_header(self, fclass: FrechetClass) -> list:
        return [
            Paragraph(f"Class {fclass.label}", self.styles["Heading2"]),
            Paragraph(
                f"p = {format_rat(fclass.p)}, c = {format_rat(fclass.c)}, "
                f"pd = {format_rat(fclass.pd)}",
                self.styles["Normal"],
            ),
        ]

    def _create_table(self, data: list[list], col_widths: list[float] = None) -> Table:
        """Create a styled table."""
        table = Table(data, colWidths=col_widths, repeatRows=1)
        table.setStyle(
            TableStyle(
                [
                    ("BACKGROUND", (0, 0), (-1, 0), colors.HexColor("#2c3e50")),
                    ("TEXTCOLOR", (0, 0), (-1, 0), colors.white),
                    ("ALIGN", (0, 0), (-1, -1), "LEFT"),
                    ("FONTNAME", (0, 0), (-1, 0), "Helvetica-Bold"),
                    ("FONTSIZE", (0, 0), (-1, 0), 10),
                    ("BOTTOMPADDING", (0, 0), (-1, 0), 8),
                    ("TOPPADDING", (0, 0), (-1, 0), 8),
                    ("FONTNAME", (0, 1), (-1, -1), "Helvetica"),
                    ("FONTSIZE", (0, 1), (-1, -1), 9),
                    ("GRID", (0, 0), (-1, -1), 0.5, colors.grey),
                    (
                        "ROWBACKGROUNDS",
                        (0, 1),
                        (-1, -1),
                        [colors.white, colors.HexColor("#f8f9fa")],
                    ),
                ]
            )
        )
        return table

    def _footer(self) -> list:
        return [
            Spacer(1, 10 * mm),
            Paragraph(
                f"Generated: {datetime.now().strftime('%d/%m/%Y %H:%M')}",
                self.styles["Normal"],
            ),
        ]

    def generate_vertex_table(self, path: Path, fclass: FrechetClass, pmfs: Sequence[Pmf]) -> None:
        """One row per vertex: support points with masses, sum support, type."""
        doc = SimpleDocTemplate(str(path), pagesize=landscape(A4))
        elements = self._class_header(fclass)
        elements.append(Paragraph("Extremal Points", self.styles["ReportTitle"]))
        elements.append(Paragraph(f"{len(pmfs)} vertices", self.styles["ReportSubtitle"]))

        if not pmfs:
            elements.append(Paragraph("No vertices recorded.", self.styles["Normal"]))
        else:
            data = [["#", "Support (bits: mass)", "Sum support", "Type"]]
            for n, pmf in enumerate(pmfs, start=1):
                support = ", ".join(
                    f"{bits_string(m, fclass.d)}: {format_rat(v)}" for m, v in pmf.masses
                )
                sums = ", ".join(str(k) for k in sum_pmf(pmf).support)
                support_cell = Paragraph(support, self.styles["Normal"])
                data.append([str(n), support_cell, sums, classify_pmf(pmf).value])
            widths = [12 * mm, 170 * mm, 35 * mm, 25 * mm]
            elements.append(self._create_table(data, col_widths=widths))

        elements.extend(self._footer())
        doc.build(elements)

    def generate_class_report(self, path: Path, report: dict) -> None:
        """Render a structured pmf report as tables."""
        doc = SimpleDocTemplate(str(path), pagesize=A4)
        cls = report["class"]
        elements = [
            Paragraph(f"Class F_{cls['d']}({cls['p']})", self.styles["Heading2"]),
            Paragraph("Pmf Report", self.styles["ReportTitle"]),
            Paragraph(
                f"{report['classification']} pmf, polynomial image {report['polynomial']}",
                self.styles["ReportSubtitle"],
            ),
        ]

        elements.append(Paragraph("Support", self.styles["Heading3"]))
        data = [["Point", "Mass"]] + [[bits, mass] for bits, mass in report["pmf"].items()]
        elements.append(self._create_table(data, col_widths=[60 * mm, 40 * mm]))

        elements.append(Paragraph("Sum distribution and stop-loss", self.styles["Heading3"]))
        data = [["k", "P(S = k)", "E[(S - k)+]"]]
        for k, prob in enumerate(report["sum_pmf"]):
            data.append([str(k), prob, report["stop_loss"].get(str(k), "")])
        elements.append(self._create_table(data, col_widths=[20 * mm, 40 * mm, 40 * mm]))

        elements.append(Paragraph("Dependence", self.styles["Heading3"]))
        extremal = report["extremal"]
        data = [
            ["Quantity", "Value"],
            ["Margins", ", ".join(report["margins"])],
            ["Mean second moment", report["mean_second_moment"]],
            ["Mean correlation", report["mean_correlation"]],
            ["Exclusivity order", str(report["exclusivity_order"])],
            [
                "Extremal",
                f"{'yes' if extremal['is_extremal'] else 'no'} "
                f"(rank {extremal['rank_found']} of {extremal['rank_required']})",
            ],
        ]
        elements.append(self._create_table(data, col_widths=[50 * mm, 100 * mm]))

        elements.extend(self._footer())
        doc.build(elements)
