/** Stanza-order check for emitted scripts.
 *
 * The expected shape is: load the CSV, split train/test, fit, predict,
 * compute the quality metric.  The metric marker depends on the script
 * kind (regression, classification or clustering).  Returns the problems
 * found (empty = clean).
 */

function stanzasFor(kind: string): Array<[name: string, marker: string]> {
  let metric = "mean_squared_error(";
  if (kind.includes("class")) metric = "accuracy_score(";
  if (kind.includes("cluster")) metric = "silhouette_score(";
  const fitThenPredict: Array<[string, string]> = [
    ["fit", ".fit("],
    ["predict", ".predict("],
  ];
  if (kind.startsWith("construct_cluster")) {
    // Cluster construction reports training inertia; no predict stanza.
    return [
      ["load", "read_csv("],
      ["split", "train_test_split("],
      ["fit", ".fit("],
      ["metric", ".inertia_"],
    ];
  }
  if (kind.includes("cluster")) {
    return [
      ["load", "read_csv("],
      ["split", "train_test_split("],
      ...fitThenPredict,
      ["metric", metric],
    ];
  }
  if (kind.startsWith("best_")) {
    // Sweeps evaluate inside the candidate loop, then predict with the
    // winner, so the metric precedes the final predict stanza.
    return [
      ["load", "read_csv("],
      ["split", "train_test_split("],
      ["fit", ".fit("],
      ["metric", metric],
      ["predict", ".predict("],
    ];
  }
  return [
    ["load", "read_csv("],
    ["split", "train_test_split("],
    ...fitThenPredict,
    ["metric", metric],
  ];
}

export function checkStructure(scriptText: string, kind = "pred"): string[] {
  const problems: string[] = [];
  let cursor = 0;
  for (const [name, marker] of stanzasFor(kind)) {
    const at = scriptText.indexOf(marker, cursor);
    if (at < 0) {
      if (scriptText.includes(marker)) {
        problems.push(`stanza out of order: ${name}`);
      } else {
        problems.push(`missing stanza: ${name}`);
      }
      continue;
    }
    cursor = at + marker.length;
  }
  return problems;
}
