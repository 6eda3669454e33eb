// Recommender Matrix rendering: tactic columns, technique cells shaded by
// urgency class. Cells with a non-zero score navigate to the Graph
// Explorer; Zero cells are inert. The config editor edits a draft and
// submits it whole, so a rejected document keeps the analyst's edits.

import { h, VNode } from "../render.js";
import type { ConfigDoc, MatrixCellDoc, MatrixResponse } from "../types.js";

export interface MatrixHandlers {
  onCellClick: (cell: MatrixCellDoc) => void;
  onConfigField: (path: string, value: string) => void;
  onConfigSubmit: () => void;
}

function cellTooltip(cell: MatrixCellDoc): string {
  return [
    `urgency score: ${cell.urgency_score.toFixed(6)}`,
    `severity level: ${cell.severity_level}`,
    `severity weight: ${cell.severity_weight}`,
    `alerts: ${cell.alert_count}`,
    `attack graph nodes: ${cell.node_count}`,
  ].join("\n");
}

function matrixCell(cell: MatrixCellDoc, handlers: MatrixHandlers): VNode {
  const clickable = cell.urgency_score > 0;
  const on: Record<string, () => void> = clickable
    ? { click: () => handlers.onCellClick(cell) }
    : {};
  return h(
    "div",
    {
      class: `matrix-cell urgency-${cell.urgency_class}${clickable ? " clickable" : ""}`,
      "data-micro": cell.micro,
      "data-score": cell.urgency_score.toFixed(6),
      title: cellTooltip(cell),
    },
    [
      h("span", { class: "cell-micro" }, [cell.micro]),
      h("span", { class: "cell-score" }, [cell.urgency_score.toFixed(3)]),
    ],
    on,
  );
}

function configEditor(config: ConfigDoc, handlers: MatrixHandlers): VNode {
  const weightInputs = Object.entries(config.severity_weights).map(([level, weight]) =>
    h("label", { class: "config-weight" }, [
      `${level} weight `,
      h("input", {
        type: "number", step: "0.05", min: "0", max: "1",
        value: String(weight), "data-field": `weight.${level}`,
      }, [], {
        change: (ev) =>
          handlers.onConfigField(
            `weight.${level}`,
            (ev as { target?: { value?: string } })?.target?.value ?? "",
          ),
      }),
    ]),
  );
  const rangeInputs = Object.entries(config.urgency_ranges).map(([cls, bounds]) =>
    h("label", { class: "config-range" }, [
      `${cls} `,
      h("input", {
        type: "text", value: `${bounds[0]},${bounds[1]}`, "data-field": `range.${cls}`,
      }, [], {
        change: (ev) =>
          handlers.onConfigField(
            `range.${cls}`,
            (ev as { target?: { value?: string } })?.target?.value ?? "",
          ),
      }),
    ]),
  );
  const levelSelects = Object.entries(config.severity_levels).map(([micro, level]) =>
    h("label", { class: "config-level", "data-micro": micro }, [
      `${micro} `,
      h(
        "select",
        { "data-field": `level.${micro}` },
        ["Low", "Medium", "High"].map((option) =>
          h("option", option === level ? { value: option, selected: "selected" } : { value: option }, [option]),
        ),
        {
          change: (ev) =>
            handlers.onConfigField(
              `level.${micro}`,
              (ev as { target?: { value?: string } })?.target?.value ?? "",
            ),
        },
      ),
    ]),
  );
  return h("details", { class: "config-editor" }, [
    h("summary", {}, ["Severity & urgency configuration"]),
    h("div", { class: "config-weights" }, weightInputs),
    h("div", { class: "config-ranges" }, rangeInputs),
    h("div", { class: "config-levels" }, levelSelects),
    h("button", { class: "config-submit" }, ["Apply"], {
      click: () => handlers.onConfigSubmit(),
    }),
  ]);
}

export function renderMatrixView(
  response: MatrixResponse,
  config: ConfigDoc,
  configError: string | null,
  handlers: MatrixHandlers,
): VNode {
  const columns = response.columns.map((column) =>
    h("div", { class: "matrix-column", "data-macro": column.macro }, [
      h("div", { class: "matrix-header" }, [column.macro]),
      ...column.cells.map((cell) => matrixCell(cell, handlers)),
    ]),
  );
  const banner = response.empty_node_set
    ? [h("p", { class: "empty-state" }, ["The current filter leaves no attack graph nodes."])]
    : [];
  const configBanner = configError
    ? [h("p", { class: "config-error" }, [configError])]
    : [];
  return h("section", { class: "view matrix-view" }, [
    ...banner,
    h("div", { class: "matrix-grid" }, columns),
    ...configBanner,
    configEditor(config, handlers),
  ]);
}
